#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stq/catalog.hpp"

namespace stq {

enum class JobKind { Cjy, String, Restricted, PathDiamond, ChainVerify };

std::string job_kind_name(JobKind k);
std::optional<JobKind> job_kind_from(const std::string& s);

// Space given directly in the job file: a free graded-commutative cup ring
// on the listed generators, turned into an intersection algebra through the
// duality pairing, plus the loop generators.
struct InlineModel {
  std::string name;
  int dim = 0;
  std::vector<GenSpec> cup_gens;
  std::vector<GenSpec> loop_gens;
};

// One parsed job file. Exactly one of catalog/space/chain_model is in play,
// decided by the kind. A present pin section, even an empty one, replaces
// the catalog entry's default pins.
struct JobSpec {
  std::string name;
  JobKind kind = JobKind::Cjy;
  std::string catalog;
  std::optional<InlineModel> space;
  std::string chain_model;
  std::optional<int> base_drop;
  std::optional<int> total_drop;
  Ring ring = Ring::integers();
  int truncation = 0;
  std::string format = "text";
  bool pins_explicit = false;
  std::vector<SymbolicPin> pins;
};

bool jobspec_equal(const JobSpec& a, const JobSpec& b);

// Line-oriented parse; the grammar is written out in docs/jobspec-format.md.
// Syntax problems throw ParseError listing every offending line; semantic
// problems (unknown kind, missing required key, unknown catalog or verifier
// model) throw ValidationError naming the line.
JobSpec parse_jobspec(const std::string& text);

// Canonical text for a spec; parse(render(j)) reproduces j exactly.
std::string render_jobspec(const JobSpec& job);

std::optional<Ring> ring_from(const std::string& s);

// Loop model the job talks about, from the catalog or the inline section.
LoopAlgebraModel job_model(const JobSpec& job);

} // namespace stq
