#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tlab/bounds.hpp"
#include "tlab/config.hpp"

namespace tlab {

/// A file the suite would write, relative to the output directory.
struct OutputFile {
  std::filesystem::path path;
  std::string contents;
};

struct SuiteResult {
  std::vector<BoundReport> reports;
  std::vector<OutputFile> files;
  /// Failed reports that are not heuristic.
  std::vector<std::size_t> hard_failures;

  int exit_code() const { return hard_failures.empty() ? 0 : 1; }
};

/// Runs every configured statement on every configured space. Inputs are
/// drawn from an mt19937_64 seeded with `config.seed`, so the result is a
/// pure function of the config.
SuiteResult evaluate_suite(const RunConfig& config);

/// Writes reports.json, reports.csv and curves/*.csv under `dir`.
void write_outputs(const SuiteResult& result, const std::filesystem::path& dir);

/// evaluate_suite followed by write_outputs into config.output.
/// Returns 0 when every non-heuristic check passes and 1 otherwise.
int run_suite(const RunConfig& config);

}  // namespace tlab
