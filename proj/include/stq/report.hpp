#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stq/jobspec.hpp"

namespace stq {

struct ReportTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Renderer-independent result of one job: ordered facts, tables, verbatim
// blocks (the diamond grid keeps its own fixed layout), and trailing notes.
// A failed verification still renders; the flag and diagnostic drive the
// caller's exit path.
struct Report {
  std::vector<std::pair<std::string, std::string>> facts;
  std::vector<ReportTable> tables;
  std::vector<std::pair<std::string, std::string>> blobs;
  std::vector<std::string> notes;
  bool verification_failed = false;
  std::string diagnostic;
};

// Dispatch a parsed job to the engine and collect the report data. Engine
// and validation problems propagate as Error; only a failing filtration
// audit comes back as a report with verification_failed set.
Report run_job(const JobSpec& job);

// format is "text", "json", or "csv"; every renderer starts with the
// version header and is byte-deterministic in the report contents.
std::string render_report(const Report& r, const std::string& format);

} // namespace stq
