#include "stq/jobspec.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "stq/chain_verifier.hpp"
#include "stq/errors.hpp"

namespace stq {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  try {
    out = std::stoll(s);
  } catch (...) {
    return false;
  }
  return true;
}

bool parse_big(const std::string& s, Int& out) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  out = Int(s);
  return true;
}

struct LineErrors {
  std::vector<std::string> syntax;
  std::vector<std::string> semantic;

  void parse_err(int line, const std::string& msg) {
    syntax.push_back("line " + std::to_string(line) + ": " + msg);
  }
  void valid_err(int line, const std::string& msg) {
    semantic.push_back("line " + std::to_string(line) + ": " + msg);
  }

  void finish() const {
    auto join = [](const std::vector<std::string>& v) {
      std::string out;
      for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
      return out;
    };
    if (!syntax.empty())
      fail(ErrorClass::Parse, "ParseError", join(syntax));
    if (!semantic.empty())
      fail(ErrorClass::Validation, "ValidationError", join(semantic));
  }
};

// gen <label> deg <n> [exterior] [order <m>] [power <k>]
std::optional<GenSpec> parse_gen(const std::vector<std::string>& tok, int line,
                                 LineErrors& errs) {
  if (tok.size() < 4 || tok[2] != "deg") {
    errs.parse_err(line, "expected \"gen <label> deg <n> [flags]\"");
    return std::nullopt;
  }
  GenSpec g;
  g.label = tok[1];
  long long deg = 0;
  if (!parse_int(tok[3], deg)) {
    errs.parse_err(line, "generator degree \"" + tok[3] + "\" is not a number");
    return std::nullopt;
  }
  g.deg = static_cast<int>(deg);
  size_t i = 4;
  while (i < tok.size()) {
    if (tok[i] == "exterior") {
      g.exterior = true;
      ++i;
    } else if ((tok[i] == "order" || tok[i] == "power") && i + 1 < tok.size()) {
      long long v = 0;
      if (!parse_int(tok[i + 1], v) || v < 0) {
        errs.parse_err(line, "\"" + tok[i] + "\" needs a nonnegative number");
        return std::nullopt;
      }
      if (tok[i] == "order")
        g.coeff_order = Int(v);
      else
        g.truncate_power = static_cast<int>(v);
      i += 2;
    } else {
      errs.parse_err(line, "unknown generator flag \"" + tok[i] + "\"");
      return std::nullopt;
    }
  }
  return g;
}

bool parse_bidegree(const std::string& s, Bidegree& out) {
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') return false;
  std::string body = s.substr(1, s.size() - 2);
  size_t comma = body.find(',');
  if (comma == std::string::npos) return false;
  long long p = 0, q = 0;
  if (!parse_int(body.substr(0, comma), p)) return false;
  if (!parse_int(body.substr(comma + 1), q)) return false;
  out = {static_cast<int>(p), static_cast<int>(q)};
  return true;
}

// <expr> := 0 | [-] term { (+|-) term }, term := [<int>*]<label>
bool parse_expr(const std::vector<std::string>& tok, size_t from, size_t to,
                std::vector<std::pair<Int, std::string>>& out,
                std::string& why) {
  out.clear();
  if (from >= to) {
    why = "empty class expression";
    return false;
  }
  if (to - from == 1 && tok[from] == "0") return true;
  Int sign = 1;
  bool want_term = true;
  for (size_t i = from; i < to; ++i) {
    const std::string& t = tok[i];
    if (t == "+" || t == "-") {
      if (want_term) {
        if (t == "-" && i == from) {
          sign = -1;
          continue;
        }
        why = "misplaced operator \"" + t + "\"";
        return false;
      }
      sign = (t == "-") ? Int(-1) : Int(1);
      want_term = true;
      continue;
    }
    if (!want_term) {
      why = "expected + or - before \"" + t + "\"";
      return false;
    }
    Int coeff = 1;
    std::string label = t;
    size_t star = t.find('*');
    if (star != std::string::npos) {
      Int c;
      if (parse_big(t.substr(0, star), c)) {
        coeff = c;
        label = t.substr(star + 1);
      }
    }
    if (label.empty()) {
      why = "term \"" + t + "\" names no class";
      return false;
    }
    out.emplace_back(sign * coeff, label);
    want_term = false;
    sign = 1;
  }
  if (want_term) {
    why = "expression ends on an operator";
    return false;
  }
  return true;
}

std::optional<SymbolicPin> parse_pin(const std::vector<std::string>& tok,
                                     int line, LineErrors& errs) {
  if (tok.size() < 5 || tok[1].size() < 2 || tok[1][0] != 'd') {
    errs.parse_err(line,
                   "expected \"pin d<r> (p,q) <classes> -> <classes>\"");
    return std::nullopt;
  }
  SymbolicPin pin;
  long long r = 0;
  if (!parse_int(tok[1].substr(1), r) || r < 2) {
    errs.parse_err(line, "pin page \"" + tok[1] + "\" must be d2 or later");
    return std::nullopt;
  }
  pin.r = static_cast<int>(r);
  if (!parse_bidegree(tok[2], pin.at)) {
    errs.parse_err(line, "bad bidegree \"" + tok[2] + "\", expected (p,q)");
    return std::nullopt;
  }
  auto arrow = std::find(tok.begin(), tok.end(), "->");
  if (arrow == tok.end()) {
    errs.parse_err(line, "pin line has no \"->\"");
    return std::nullopt;
  }
  size_t ai = static_cast<size_t>(arrow - tok.begin());
  std::string why;
  if (!parse_expr(tok, 3, ai, pin.source, why)) {
    errs.parse_err(line, why);
    return std::nullopt;
  }
  if (!parse_expr(tok, ai + 1, tok.size(), pin.target, why)) {
    errs.parse_err(line, why);
    return std::nullopt;
  }
  if (pin.source.empty()) {
    errs.valid_err(line, "pin source must name at least one class");
    return std::nullopt;
  }
  return pin;
}

std::string render_terms(const std::vector<std::pair<Int, std::string>>& v) {
  if (v.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += " + ";
    out += v[i].first.str() + "*" + v[i].second;
  }
  return out;
}

bool gens_equal(const std::vector<GenSpec>& a, const std::vector<GenSpec>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].label != b[i].label || a[i].deg != b[i].deg ||
        a[i].exterior != b[i].exterior ||
        a[i].coeff_order != b[i].coeff_order ||
        a[i].truncate_power != b[i].truncate_power)
      return false;
  return true;
}

} // namespace

std::string job_kind_name(JobKind k) {
  switch (k) {
    case JobKind::Cjy: return "cjy";
    case JobKind::String: return "string";
    case JobKind::Restricted: return "restricted";
    case JobKind::PathDiamond: return "path-diamond";
    case JobKind::ChainVerify: return "chain-verify";
  }
  return "?";
}

std::optional<JobKind> job_kind_from(const std::string& s) {
  if (s == "cjy") return JobKind::Cjy;
  if (s == "string") return JobKind::String;
  if (s == "restricted") return JobKind::Restricted;
  if (s == "path-diamond") return JobKind::PathDiamond;
  if (s == "chain-verify") return JobKind::ChainVerify;
  return std::nullopt;
}

std::optional<Ring> ring_from(const std::string& s) {
  if (s == "Z") return Ring::integers();
  if (s == "Q") return Ring::rationals();
  std::string digits;
  if (s.size() > 2 && s.rfind("Z/", 0) == 0)
    digits = s.substr(2);
  else if (s.size() > 1 && s[0] == 'F')
    digits = s.substr(1);
  else
    return std::nullopt;
  Int p;
  if (!parse_big(digits, p) || p < 2) return std::nullopt;
  try {
    return Ring::prime_field(p);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool jobspec_equal(const JobSpec& a, const JobSpec& b) {
  if (a.name != b.name || a.kind != b.kind || a.catalog != b.catalog ||
      a.chain_model != b.chain_model || a.base_drop != b.base_drop ||
      a.total_drop != b.total_drop || !(a.ring == b.ring) ||
      a.truncation != b.truncation || a.format != b.format ||
      a.pins_explicit != b.pins_explicit || a.pins != b.pins)
    return false;
  if (a.space.has_value() != b.space.has_value()) return false;
  if (a.space) {
    if (a.space->name != b.space->name || a.space->dim != b.space->dim ||
        !gens_equal(a.space->cup_gens, b.space->cup_gens) ||
        !gens_equal(a.space->loop_gens, b.space->loop_gens))
      return false;
  }
  return true;
}

JobSpec parse_jobspec(const std::string& text) {
  JobSpec job;
  LineErrors errs;
  std::map<std::string, int> seen; // job keys to first line
  bool have_kind = false, have_trunc = false;
  int kind_line = 0;

  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s == "[job]" || s == "[space]" || s == "[loops]" || s == "[pins]") {
        section = s.substr(1, s.size() - 2);
        if (section == "space" || section == "loops") {
          if (!job.space) job.space.emplace();
        }
        if (section == "pins") job.pins_explicit = true;
        continue;
      }
      errs.parse_err(line, "unknown section \"" + s + "\"");
      section.clear();
      continue;
    }
    if (section.empty()) {
      errs.parse_err(line, "content before any section header");
      continue;
    }

    if (section == "pins") {
      auto tok = split_ws(s);
      if (tok.empty() || tok[0] != "pin") {
        errs.parse_err(line, "pin sections hold only pin lines");
        continue;
      }
      if (auto pin = parse_pin(tok, line, errs)) job.pins.push_back(*pin);
      continue;
    }

    auto tok = split_ws(s);
    if ((section == "space" || section == "loops") && !tok.empty() &&
        tok[0] == "gen") {
      if (auto g = parse_gen(tok, line, errs)) {
        if (section == "space")
          job.space->cup_gens.push_back(*g);
        else
          job.space->loop_gens.push_back(*g);
      }
      continue;
    }

    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      errs.parse_err(line, "expected \"key = value\"");
      continue;
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errs.parse_err(line, "expected \"key = value\"");
      continue;
    }
    if (section == "loops") {
      errs.parse_err(line, "the loops section holds only gen lines");
      continue;
    }
    if (section == "space") {
      if (key == "dim") {
        long long d = 0;
        if (!parse_int(value, d) || d < 0)
          errs.parse_err(line, "dim must be a nonnegative number");
        else
          job.space->dim = static_cast<int>(d);
      } else if (key == "name") {
        job.space->name = value;
      } else {
        errs.valid_err(line, "unknown space key \"" + key + "\"");
      }
      continue;
    }

    // [job] section
    std::string full = section + "." + key;
    if (seen.count(full)) {
      errs.valid_err(line, "duplicate key \"" + key + "\" (first on line " +
                               std::to_string(seen[full]) + ")");
      continue;
    }
    seen[full] = line;
    if (key == "name") {
      job.name = value;
    } else if (key == "kind") {
      auto k = job_kind_from(value);
      if (!k) {
        errs.valid_err(line, "unknown kind \"" + value +
                                 "\"; kinds: cjy, string, restricted, "
                                 "path-diamond, chain-verify");
      } else {
        job.kind = *k;
        have_kind = true;
        kind_line = line;
      }
    } else if (key == "catalog") {
      job.catalog = value;
      if (!catalog_has(value))
        errs.valid_err(line, "unknown catalog entry \"" + value + "\"");
    } else if (key == "model") {
      job.chain_model = value;
      const auto& names = chain_model_names();
      if (std::find(names.begin(), names.end(), value) == names.end()) {
        std::string known;
        for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
        errs.valid_err(line, "unknown verifier model \"" + value +
                                 "\"; models: " + known);
      }
    } else if (key == "ring") {
      auto r = ring_from(value);
      if (!r)
        errs.valid_err(line, "unknown ring \"" + value +
                                 "\"; use Z, Q, or Z/<prime>");
      else
        job.ring = *r;
    } else if (key == "truncation") {
      long long t = 0;
      if (!parse_int(value, t) || t < 1)
        errs.parse_err(line, "truncation must be a positive number");
      else {
        job.truncation = static_cast<int>(t);
        have_trunc = true;
      }
    } else if (key == "format") {
      if (value != "text" && value != "json" && value != "csv")
        errs.valid_err(line, "format must be text, json, or csv");
      else
        job.format = value;
    } else if (key == "base-drop" || key == "total-drop") {
      long long v = 0;
      if (!parse_int(value, v) || v < 0)
        errs.parse_err(line, key + " must be a nonnegative number");
      else if (key == "base-drop")
        job.base_drop = static_cast<int>(v);
      else
        job.total_drop = static_cast<int>(v);
    } else {
      errs.valid_err(line, "unknown job key \"" + key + "\"");
    }
  }

  if (!errs.syntax.empty() || !errs.semantic.empty()) errs.finish();

  if (!have_kind)
    fail(ErrorClass::Validation, "ValidationError",
         "the job section must set kind");
  bool chain = job.kind == JobKind::ChainVerify;
  if (chain) {
    if (job.chain_model.empty())
      fail(ErrorClass::Validation, "ValidationError",
           "chain-verify jobs must set model");
    if (!job.catalog.empty() || job.space || job.pins_explicit || have_trunc)
      fail(ErrorClass::Validation, "ValidationError",
           "chain-verify jobs take only model, ring, format, and the drop "
           "overrides (line " +
               std::to_string(kind_line) + ")");
  } else {
    if (job.catalog.empty() == !job.space)
      fail(ErrorClass::Validation, "ValidationError",
           "exactly one of a catalog label or a space section is required");
    if (!have_trunc)
      fail(ErrorClass::Validation, "ValidationError",
           "spectral sequence jobs must set truncation");
    if (job.base_drop || job.total_drop)
      fail(ErrorClass::Validation, "ValidationError",
           "drop overrides apply only to chain-verify jobs");
    if (job.kind == JobKind::Restricted && job.catalog.empty())
      fail(ErrorClass::Validation, "ValidationError",
           "restricted jobs need a catalog entry with factor data");
    if (!job.chain_model.empty())
      fail(ErrorClass::Validation, "ValidationError",
           "model applies only to chain-verify jobs");
  }
  return job;
}

std::string render_jobspec(const JobSpec& job) {
  std::ostringstream out;
  out << "[job]\n";
  if (!job.name.empty()) out << "name = " << job.name << "\n";
  out << "kind = " << job_kind_name(job.kind) << "\n";
  if (!job.catalog.empty()) out << "catalog = " << job.catalog << "\n";
  if (!job.chain_model.empty()) out << "model = " << job.chain_model << "\n";
  out << "ring = " << job.ring.to_string() << "\n";
  if (job.truncation > 0) out << "truncation = " << job.truncation << "\n";
  out << "format = " << job.format << "\n";
  if (job.base_drop) out << "base-drop = " << *job.base_drop << "\n";
  if (job.total_drop) out << "total-drop = " << *job.total_drop << "\n";
  if (job.space) {
    out << "\n[space]\n";
    if (!job.space->name.empty()) out << "name = " << job.space->name << "\n";
    out << "dim = " << job.space->dim << "\n";
    auto emit = [&out](const GenSpec& g) {
      out << "gen " << g.label << " deg " << g.deg;
      if (g.exterior) out << " exterior";
      if (g.coeff_order >= 2) out << " order " << g.coeff_order;
      if (g.truncate_power > 0) out << " power " << g.truncate_power;
      out << "\n";
    };
    for (const auto& g : job.space->cup_gens) emit(g);
    out << "\n[loops]\n";
    for (const auto& g : job.space->loop_gens) emit(g);
  }
  if (job.pins_explicit) {
    out << "\n[pins]\n";
    for (const auto& p : job.pins)
      out << "pin d" << p.r << " (" << p.at.first << "," << p.at.second
          << ") " << render_terms(p.source) << " -> "
          << render_terms(p.target) << "\n";
  }
  return out.str();
}

LoopAlgebraModel job_model(const JobSpec& job) {
  if (!job.catalog.empty()) return catalog_entry(job.catalog).model;
  if (!job.space)
    fail(ErrorClass::Validation, "ValidationError",
         "job has neither a catalog label nor a space section");
  const InlineModel& m = *job.space;
  GradedAlgebra cup = free_graded_commutative(m.cup_gens, m.dim);
  auto inter = intersection_from_cup(cup, m.dim, job.ring);
  LoopAlgebraModel model;
  model.name = m.name.empty() ? "inline" : m.name;
  model.dim = m.dim;
  model.intersection = inter.alg;
  model.fundamental = inter.unit_idx;
  model.point = inter.point_idx;
  model.loop_gens = m.loop_gens;
  model.validate();
  return model;
}

} // namespace stq
