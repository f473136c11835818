#include "stq/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "stq/chain_verifier.hpp"
#include "stq/errors.hpp"

namespace stq {

namespace {

std::string bidegree_str(Bidegree at) {
  return "(" + std::to_string(at.first) + ", " + std::to_string(at.second) +
         ")";
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

void job_facts(Report& r, const JobSpec& job, const std::string& space) {
  if (!job.name.empty()) r.facts.emplace_back("job", job.name);
  r.facts.emplace_back("kind", job_kind_name(job.kind));
  r.facts.emplace_back("space", space);
  r.facts.emplace_back("ring", job.ring.to_string());
  if (job.kind != JobKind::ChainVerify)
    r.facts.emplace_back("truncation", std::to_string(job.truncation));
}

void add_pins(SpectralSequence& ss, const std::vector<SymbolicPin>& pins) {
  for (const auto& p : pins) ss.add_pin(resolve_pin(ss, p));
}

void collapse_facts(Report& r, const SpectralSequence& ss) {
  int c = ss.collapsed_at();
  r.facts.emplace_back("collapse",
                       c <= 2 ? "page 2 (no nonzero differential)"
                              : "page " + std::to_string(c) +
                                    " (last nonzero differential on page " +
                                    std::to_string(c - 1) + ")");
  if (!ss.tor_gaps().empty()) {
    r.facts.emplace_back("kunneth gaps",
                         std::to_string(ss.tor_gaps().size()) +
                             " torsion pairings recorded, not computed");
    ReportTable t;
    t.title = "kunneth gaps";
    t.columns = {"bidegree", "order", "classes"};
    for (const auto& g : ss.tor_gaps())
      t.rows.push_back({bidegree_str(g.at), g.order.str(), g.description});
    r.tables.push_back(std::move(t));
  }
}

void stable_table(Report& r, const SpectralSequence& ss, int truncation,
                  const Ring& ring) {
  ReportTable t;
  t.title = "stable page";
  t.columns = {"bidegree", "total", "group", "classes"};
  for (const auto& [at, entry] : ss.einfty().entries) {
    if (entry.trivial()) continue;
    int total = at.first + at.second;
    if (total > truncation) continue;
    std::vector<std::string> labels;
    for (const auto& g : entry.gens) labels.push_back(g.label);
    t.rows.push_back({bidegree_str(at), std::to_string(total),
                      entry.group.to_string(ring), join(labels, ", ")});
  }
  r.tables.push_back(std::move(t));
}

void extension_facts(Report& r, const SpectralSequence& ss, int truncation) {
  std::vector<int> totals;
  for (const auto& [at, entry] : ss.einfty().entries) {
    if (entry.trivial()) continue;
    int total = at.first + at.second;
    if (total > truncation) continue;
    if (ss.extension_ambiguous(total)) totals.push_back(total);
  }
  std::sort(totals.begin(), totals.end());
  totals.erase(std::unique(totals.begin(), totals.end()), totals.end());
  if (totals.empty()) {
    r.facts.emplace_back("extensions", "none ambiguous");
    return;
  }
  std::vector<std::string> out;
  for (int t : totals) out.push_back(std::to_string(t));
  r.facts.emplace_back(
      "extensions", "ExtensionAmbiguous at totals " + join(out, ", "));
}

void image_section(Report& r, const LoopAlgebraModel& model,
                   const SpectralSequence& ss, const Ring& ring,
                   const std::string& degree_note) {
  IntersectionImage img = intersection_morphism(model, ss);
  ReportTable t;
  t.title = "intersection image";
  t.columns = {"degree", "image", "ambient", "classes"};
  for (const auto& d : img.degrees) {
    if (d.ambient.gen_count() == 0 && d.image.gen_count() == 0) continue;
    t.rows.push_back({std::to_string(d.degree),
                      d.image.to_string(ring) + (d.full ? " (full)" : ""),
                      d.ambient.to_string(ring), join(d.labels, ", ")});
  }
  r.tables.push_back(std::move(t));
  std::vector<std::string> degs;
  for (int d : img.nonzero_degrees()) degs.push_back(std::to_string(d));
  r.facts.emplace_back("image degrees",
                       degs.empty() ? "none" : join(degs, ", "));
  r.facts.emplace_back("image full everywhere",
                       img.full_everywhere() ? "yes" : "no");
  if (!degree_note.empty()) r.notes.push_back(degree_note);
}

void equivalence_facts(Report& r, const LoopAlgebraModel& model,
                       const SpectralSequence& ss) {
  TheoremCReport tc = check_theorem_c(model, ss);
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  r.facts.emplace_back("collapse equivalences",
                       std::string("onto=") + yn(tc.onto) +
                           " collapse=" + yn(tc.collapse) +
                           " injective=" + yn(tc.injective));
}

Report run_loop_stack(const JobSpec& job) {
  Report r;
  LoopAlgebraModel model = job_model(job);
  std::vector<SymbolicPin> defaults;
  bool tor_gaps = false;
  std::string degree_note;
  if (!job.catalog.empty()) {
    CatalogEntry entry = catalog_entry(job.catalog);
    defaults = entry.default_pins;
    tor_gaps = entry.allow_tor_gaps;
    degree_note = entry.degree_note;
  }
  job_facts(r, job, model.name + " (dim " + std::to_string(model.dim) + ")");
  SpectralSequence ss(loop_e2_product(model, tor_gaps), job.ring,
                      job.truncation);
  add_pins(ss, job.pins_explicit ? job.pins : defaults);
  ss.run();
  collapse_facts(r, ss);
  if (job.kind == JobKind::Cjy) stable_table(r, ss, job.truncation, job.ring);
  image_section(r, model, ss, job.ring, degree_note);
  equivalence_facts(r, model, ss);
  extension_facts(r, ss, job.truncation);
  if (job.kind == JobKind::String) {
    ReportTable t;
    t.title = "point action";
    t.columns = {"class", "bidegree", "point times class"};
    for (const auto& [at, entry] : ss.einfty().entries) {
      if (at.first != 0 || entry.trivial()) continue;
      if (at.second > job.truncation) continue;
      for (int i = 0; i < entry.rank(); ++i) {
        PageClass x{ss.last_page(), at, ScaledVec{}};
        x.coords.num.assign(entry.rank(), Int(0));
        x.coords.num[i] = 1;
        MuResult m = mu_a(model, ss, x);
        t.rows.push_back({entry.gens[i].label, bidegree_str(at),
                          ss.class_to_string(m.value) +
                              (m.extension_ambiguous ? " (one layer of an "
                                                       "ambiguous extension)"
                                                     : "")});
      }
    }
    r.tables.push_back(std::move(t));
  }
  return r;
}

Report run_restricted(const JobSpec& job) {
  CatalogEntry entry = catalog_entry(job.catalog);
  if (!entry.product)
    fail(ErrorClass::Validation, "NotComposite",
         "restricted runs need a product catalog entry; \"" + job.catalog +
             "\" does not split");
  Report r;
  const ProductParts& parts = *entry.product;
  job_facts(r, job,
            parts.left.name + " inside " + entry.model.name + " (dim " +
                std::to_string(entry.model.dim) + ")");
  SubmanifoldSpec sub = left_factor_embedding(parts.pm, parts.left);
  RestrictedSpec rs = restricted_product_spec(entry.model, sub);
  SpectralSequence ss(rs.spec, job.ring, job.truncation);
  add_pins(ss, job.pins);
  ss.run();
  r.facts.emplace_back(
      "embedding",
      "shriek matrix " + std::to_string(rs.embedding.rows()) + " x " +
          std::to_string(rs.embedding.cols()) + " over the base classes");
  collapse_facts(r, ss);
  stable_table(r, ss, job.truncation, job.ring);
  extension_facts(r, ss, job.truncation);
  return r;
}

Report run_path_diamond(const JobSpec& job) {
  Report r;
  LoopAlgebraModel model = job_model(job);
  job_facts(r, job, model.name + " (dim " + std::to_string(model.dim) + ")");
  DiamondAlgebra dia = build_diamond_table(model);
  r.blobs.emplace_back("diamond product table",
                       render_diamond_table(dia, model));
  r.facts.emplace_back("diamond identity",
                       dia.basis_unit ? dia.labels[*dia.basis_unit]
                                      : std::string("no basis class"));
  if (dia.noncommutative_witness) {
    auto [i, j] = *dia.noncommutative_witness;
    r.facts.emplace_back("diamond commutative",
                         "no (" + dia.labels[i] + " against " + dia.labels[j] +
                             ")");
  } else {
    r.facts.emplace_back("diamond commutative", "yes on the basis");
  }
  SpectralSequence ss(path_fibration_spec(model), job.ring, job.truncation);
  add_pins(ss, job.pins);
  ss.run();
  collapse_facts(r, ss);
  stable_table(r, ss, job.truncation, job.ring);
  extension_facts(r, ss, job.truncation);

  // Products of the surviving classes, the abutment's multiplication table.
  struct Survivor {
    std::string label;
    PageClass cls;
  };
  std::vector<Survivor> sur;
  for (const auto& [at, entry] : ss.einfty().entries) {
    if (entry.trivial() || at.first + at.second > job.truncation) continue;
    for (int i = 0; i < entry.rank(); ++i) {
      PageClass x{ss.last_page(), at, ScaledVec{}};
      x.coords.num.assign(entry.rank(), Int(0));
      x.coords.num[i] = 1;
      sur.push_back({entry.gens[i].label, x});
    }
  }
  ReportTable t;
  t.title = "products of stable classes";
  t.columns = {"left", "right", "product"};
  for (const auto& a : sur)
    for (const auto& b : sur)
      t.rows.push_back(
          {a.label, b.label, ss.class_to_string(ss.multiply(a.cls, b.cls))});
  r.tables.push_back(std::move(t));
  return r;
}

Report run_chain(const JobSpec& job) {
  Report r;
  ChainModel cm = chain_model(job.chain_model, job.ring);
  if (job.base_drop) cm.embedding.base_drop = *job.base_drop;
  if (job.total_drop) cm.embedding.total_drop = *job.total_drop;
  if (job.base_drop || job.total_drop) validate_embedding(cm.embedding);
  job_facts(r, job,
            cm.embedding.total->name() + " over " +
                cm.embedding.fibration->target().name());
  r.facts.emplace_back("model", job.chain_model);
  r.facts.emplace_back("declared drops",
                       "base " + std::to_string(cm.embedding.base_drop) +
                           ", total " +
                           std::to_string(cm.embedding.total_drop));
  ShiftReport rep = verify_filtration_shift(cm.embedding);
  r.facts.emplace_back("simplices checked", std::to_string(rep.checked));
  r.facts.emplace_back("nonzero images", std::to_string(rep.nonzero_images));
  if (rep.passed()) {
    r.facts.emplace_back("filtration shift", "PASS on every simplex");
    return r;
  }
  r.facts.emplace_back(
      "filtration shift",
      "FAIL (" + std::to_string(rep.failures.size()) + " level violations, " +
          std::to_string(rep.degree_mismatches) + " degree mismatches)");
  ReportTable t;
  t.title = "violations";
  t.columns = {"simplex", "level", "image", "image level", "allowed"};
  for (const auto& f : rep.failures)
    t.rows.push_back({f.simplex + " (dim " + std::to_string(f.dim) + ")",
                      std::to_string(f.level),
                      f.image_simplex + " (dim " +
                          std::to_string(f.image_dim) + ")",
                      std::to_string(f.image_level),
                      std::to_string(f.allowed)});
  r.tables.push_back(std::move(t));
  r.verification_failed = true;
  if (!rep.failures.empty()) {
    const auto& f = rep.failures.front();
    r.diagnostic = "filtration shift failed: " + f.simplex + " at level " +
                   std::to_string(f.level) + " maps onto " + f.image_simplex +
                   " at level " + std::to_string(f.image_level) +
                   ", allowed at most " + std::to_string(f.allowed);
  } else {
    r.diagnostic = "filtration shift failed: " +
                   std::to_string(rep.degree_mismatches) +
                   " images landed in the wrong degree";
  }
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_str(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << "stq-report v1\n";
  for (const auto& [k, v] : r.facts) out << k << ": " << v << "\n";
  for (const auto& [title, body] : r.blobs) {
    out << "\n" << title << ":\n" << body;
    if (!body.empty() && body.back() != '\n') out << "\n";
  }
  for (const auto& t : r.tables) {
    out << "\n" << t.title << ":\n";
    std::vector<size_t> w(t.columns.size());
    for (size_t c = 0; c < t.columns.size(); ++c) w[c] = t.columns[c].size();
    for (const auto& row : t.rows)
      for (size_t c = 0; c < row.size() && c < w.size(); ++c)
        w[c] = std::max(w[c], row[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
      std::string text;
      for (size_t c = 0; c < w.size(); ++c) {
        std::string cell = c < cells.size() ? cells[c] : "";
        text += "  " + cell;
        if (c + 1 < w.size()) text += std::string(w[c] - cell.size(), ' ');
      }
      while (!text.empty() && text.back() == ' ') text.pop_back();
      out << text << "\n";
    };
    line(t.columns);
    size_t total = 2;
    for (size_t c = 0; c < w.size(); ++c) total += w[c] + 2;
    out << "  " << std::string(total - 2, '-') << "\n";
    for (const auto& row : t.rows) line(row);
    if (t.rows.empty()) out << "  (empty)\n";
  }
  for (const auto& n : r.notes) out << "\nnote: " << n << "\n";
  return out.str();
}

std::string render_json(const Report& r) {
  std::ostringstream out;
  out << "{\n  \"report\": \"stq-report v1\",\n  \"facts\": [";
  for (size_t i = 0; i < r.facts.size(); ++i)
    out << (i ? "," : "") << "\n    {\"key\": " << json_str(r.facts[i].first)
        << ", \"value\": " << json_str(r.facts[i].second) << "}";
  out << "\n  ],\n  \"blobs\": [";
  for (size_t i = 0; i < r.blobs.size(); ++i)
    out << (i ? "," : "") << "\n    {\"title\": "
        << json_str(r.blobs[i].first)
        << ", \"body\": " << json_str(r.blobs[i].second) << "}";
  out << "\n  ],\n  \"tables\": [";
  for (size_t i = 0; i < r.tables.size(); ++i) {
    const auto& t = r.tables[i];
    out << (i ? "," : "") << "\n    {\"title\": " << json_str(t.title)
        << ", \"columns\": [";
    for (size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? ", " : "") << json_str(t.columns[c]);
    out << "], \"rows\": [";
    for (size_t rr = 0; rr < t.rows.size(); ++rr) {
      out << (rr ? ", " : "") << "[";
      for (size_t c = 0; c < t.rows[rr].size(); ++c)
        out << (c ? ", " : "") << json_str(t.rows[rr][c]);
      out << "]";
    }
    out << "]}";
  }
  out << "\n  ],\n  \"notes\": [";
  for (size_t i = 0; i < r.notes.size(); ++i)
    out << (i ? ", " : "") << json_str(r.notes[i]);
  out << "],\n  \"verification_failed\": "
      << (r.verification_failed ? "true" : "false");
  if (!r.diagnostic.empty())
    out << ",\n  \"diagnostic\": " << json_str(r.diagnostic);
  out << "\n}\n";
  return out.str();
}

std::string render_csv(const Report& r) {
  std::ostringstream out;
  out << "# stq-report v1\n";
  for (const auto& [k, v] : r.facts) out << "# " << k << ": " << v << "\n";
  for (const auto& t : r.tables) {
    out << "# " << t.title << "\n";
    for (size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? "," : "") << csv_field(t.columns[c]);
    out << "\n";
    for (const auto& row : t.rows) {
      for (size_t c = 0; c < row.size(); ++c)
        out << (c ? "," : "") << csv_field(row[c]);
      out << "\n";
    }
  }
  for (const auto& n : r.notes) out << "# note: " << n << "\n";
  return out.str();
}

} // namespace

Report run_job(const JobSpec& job) {
  switch (job.kind) {
    case JobKind::Cjy:
    case JobKind::String: return run_loop_stack(job);
    case JobKind::Restricted: return run_restricted(job);
    case JobKind::PathDiamond: return run_path_diamond(job);
    case JobKind::ChainVerify: return run_chain(job);
  }
  fail(ErrorClass::Validation, "ValidationError", "unhandled job kind");
}

std::string render_report(const Report& r, const std::string& format) {
  if (format == "json") return render_json(r);
  if (format == "csv") return render_csv(r);
  if (format == "text") return render_text(r);
  fail(ErrorClass::Validation, "ValidationError",
       "format must be text, json, or csv");
}

} // namespace stq
