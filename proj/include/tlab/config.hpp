#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tlab/bounds.hpp"
#include "tlab/mms.hpp"
#include "tlab/transport.hpp"

namespace tlab {

/// A catalog space or a JSON space file.
struct SpaceSource {
  std::optional<CatalogSpec> catalog;
  std::optional<std::filesystem::path> file;

  MetricMeasureSpace build() const;
  std::string describe() const;
};

/// Everything a suite run depends on. The seed fixes every random input.
struct RunConfig {
  std::vector<SpaceSource> spaces;
  std::vector<Statement> statements;
  std::vector<double> p_values{1.0, 2.0};
  std::vector<double> alpha_values;
  /// Replaces every default time grid when set.
  std::optional<std::vector<double>> t_grid;
  /// Points of the default grid for heat-only statements.
  int t_points = 1000;
  /// Points of the default grid for statements that solve HK per time.
  int hk_t_points = 20;
  /// Random zero-mean test functions per space, on top of phi_1.
  int random_functions = 0;
  /// Eigenpairs 1..k used by the eigenfunction statements.
  int eigenpairs = 1;
  EntropyTransportSettings solver;
  MeanPolicy mean_policy = MeanPolicy::Subtract;
  std::filesystem::path output{"tlab-out"};
  std::uint64_t seed = 0;
};

/// Parses JSON or TOML text; unknown keys, unknown statement ids and
/// malformed values raise Error with ErrorCode::Parse.
RunConfig parse_config(const std::string& text, bool toml);

/// Picks the format from the extension (.toml, otherwise JSON).
RunConfig load_config(const std::filesystem::path& path);

}  // namespace tlab
