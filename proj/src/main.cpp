#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stq/catalog.hpp"
#include "stq/chain_verifier.hpp"
#include "stq/errors.hpp"
#include "stq/jobspec.hpp"
#include "stq/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good())
    stq::fail(stq::ErrorClass::Parse, "ParseError",
              "cannot open job file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void apply_overrides(stq::JobSpec& job, const std::string& ring,
                     int max_degree, const std::string& format) {
  if (!ring.empty()) {
    auto r = stq::ring_from(ring);
    if (!r)
      stq::fail(stq::ErrorClass::Validation, "ValidationError",
                "unknown ring \"" + ring + "\"; use Z, Q, or Z/<prime>");
    job.ring = *r;
  }
  if (max_degree > 0) {
    if (job.kind == stq::JobKind::ChainVerify)
      stq::fail(stq::ErrorClass::Validation, "ValidationError",
                "--max-degree does not apply to chain-verify jobs");
    job.truncation = max_degree;
  }
  if (!format.empty()) job.format = format;
}

int run_file(const std::string& path, const std::string& ring, int max_degree,
             const std::string& format, bool chains_only) {
  stq::JobSpec job = stq::parse_jobspec(read_file(path));
  if (job.name.empty())
    job.name = std::filesystem::path(path).stem().string();
  if (chains_only && job.kind != stq::JobKind::ChainVerify)
    stq::fail(stq::ErrorClass::Validation, "ValidationError",
              "verify-chains runs only chain-verify jobs; \"" + path +
                  "\" has kind " + job_kind_name(job.kind));
  apply_overrides(job, ring, max_degree, format);
  stq::Report rep = stq::run_job(job);
  std::cout << stq::render_report(rep, job.format);
  if (rep.verification_failed) {
    std::cerr << rep.diagnostic << "\n";
    return static_cast<int>(stq::ErrorClass::Verification);
  }
  return 0;
}

int show_catalog() {
  std::cout << "catalog entries:\n";
  for (const auto& label : stq::catalog_labels()) {
    stq::CatalogEntry e = stq::catalog_entry(label);
    std::cout << "  " << label << std::string(7 - label.size(), ' ')
              << "dim " << e.model.dim << ", " << e.note << "\n";
  }
  std::cout << "any S<m> with m >= 2 is also available.\n";
  std::cout << "\nchain verifier models:\n";
  for (const auto& name : stq::chain_model_names())
    std::cout << "  " << name << "\n";
  return 0;
}

int explain(const std::string& label) {
  stq::CatalogEntry e = stq::catalog_entry(label);
  std::cout << e.label << ": " << e.note << "\n";
  std::cout << "dimension " << e.model.dim << "\n";
  std::cout << "intersection classes:\n";
  for (const auto& elt : e.model.intersection.elts()) {
    std::cout << "  " << elt.label << " in degree " << elt.deg;
    if (elt.order != 0) std::cout << " of order " << elt.order;
    if (e.model.intersection.unit() ==
        e.model.intersection.find(elt.label).value_or(-1))
      std::cout << " (unit)";
    std::cout << "\n";
  }
  std::cout << "loop generators:\n";
  if (e.model.loop_gens.empty()) std::cout << "  none\n";
  for (const auto& g : e.model.loop_gens) {
    std::cout << "  " << g.label << " in degree " << g.deg;
    if (g.exterior) std::cout << ", exterior";
    if (g.coeff_order >= 2)
      std::cout << ", coefficients Z/" << g.coeff_order;
    std::cout << "\n";
  }
  if (!e.default_pins.empty()) {
    std::cout << "default pins:\n";
    for (const auto& p : e.default_pins) {
      std::cout << "  d" << p.r << " at (" << p.at.first << ","
                << p.at.second << "): ";
      for (size_t i = 0; i < p.source.size(); ++i)
        std::cout << (i ? " + " : "") << p.source[i].first << "*"
                  << p.source[i].second;
      std::cout << " -> ";
      if (p.target.empty()) std::cout << "0";
      for (size_t i = 0; i < p.target.size(); ++i)
        std::cout << (i ? " + " : "") << p.target[i].first << "*"
                  << p.target[i].second;
      std::cout << "\n";
    }
  }
  if (!e.degree_note.empty()) std::cout << "note: " << e.degree_note << "\n";
  if (e.product)
    std::cout << "splits as " << e.product->left.name << " x "
              << e.product->right.name
              << "; restricted and projection runs apply.\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact spectral sequence runs for loop and path products"};
  app.require_subcommand(1);

  std::string job_path, ring, format, label;
  int max_degree = 0;

  CLI::App* run = app.add_subcommand("run", "run a job file");
  run->add_option("file", job_path, "job file")->required();
  run->add_option("--ring", ring, "override the coefficient ring");
  run->add_option("--max-degree", max_degree, "override the truncation");
  run->add_option("--format", format, "text, json, or csv");

  CLI::App* chains =
      app.add_subcommand("verify-chains", "run a chain-verify job file");
  chains->add_option("file", job_path, "job file")->required();
  chains->add_option("--ring", ring, "override the coefficient ring");
  chains->add_option("--format", format, "text, json, or csv");

  CLI::App* cat = app.add_subcommand("catalog", "list built-in spaces");

  CLI::App* exp = app.add_subcommand("explain", "describe a catalog entry");
  exp->add_option("label", label, "catalog label")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed())
      return run_file(job_path, ring, max_degree, format, false);
    if (chains->parsed())
      return run_file(job_path, ring, 0, format, true);
    if (cat->parsed()) return show_catalog();
    if (exp->parsed()) return explain(label);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const stq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
