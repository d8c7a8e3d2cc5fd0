// Command-line front end: describe, spectrum, verify, sweep.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlab/config.hpp"
#include "tlab/geometry.hpp"
#include "tlab/heat.hpp"
#include "tlab/report.hpp"
#include "tlab/suite.hpp"

namespace {

constexpr int kExitParse = 2;

struct SpaceArgs {
  std::string catalog;
  tlab::Index n = 0;
  std::optional<double> parameter;
  std::vector<double> weights;
  std::string file;

  void attach(CLI::App& app) {
    app.add_option("--catalog", catalog, "circle, interval, torus2d, ou_chain, two_point or path");
    app.add_option("--n", n, "number of points (torus: side length)");
    app.add_option("--parameter", parameter, "length, distance or K, depending on the catalog entry");
    app.add_option("--weights", weights, "path conductances");
    app.add_option("--space-file", file, "JSON space file");
  }

  bool given() const { return !catalog.empty() || !file.empty(); }

  tlab::SpaceSource source() const {
    tlab::SpaceSource src;
    if (!file.empty()) {
      src.file = file;
      return src;
    }
    const auto kind = tlab::catalog_kind_from_string(catalog);
    if (!kind) throw tlab::Error(tlab::ErrorCode::Parse, "unknown catalog space '" + catalog + "'");
    tlab::CatalogSpec spec;
    spec.kind = *kind;
    if (n > 0) {
      spec.n = n;
    } else if (spec.kind == tlab::CatalogKind::Path && !weights.empty()) {
      spec.n = static_cast<tlab::Index>(weights.size()) + 1;
    }
    spec.parameter = parameter;
    spec.weights = weights;
    src.catalog = spec;
    return src;
  }

  /// Invalid space input is reported like any other input error.
  tlab::MetricMeasureSpace build() const {
    const tlab::SpaceSource src = source();
    try {
      return src.build();
    } catch (const tlab::Error& e) {
      if (e.code() == tlab::ErrorCode::Parse) throw;
      throw tlab::Error(tlab::ErrorCode::Parse, "space " + src.describe() + ": " + e.what());
    }
  }
};

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> statements;
  std::vector<double> alpha;
  SpaceArgs space;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "TOML or JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--statement", statements, "statement ids to run (replaces the config list)");
    app.add_option("--alpha", alpha, "alpha values for the HK trace");
    space.attach(app);
  }

  tlab::RunConfig resolve() const {
    tlab::RunConfig cfg = config.empty() ? tlab::RunConfig{} : tlab::load_config(config);
    if (space.given()) cfg.spaces = {space.source()};
    if (!out.empty()) cfg.output = out;
    if (seed) cfg.seed = *seed;
    if (!alpha.empty()) cfg.alpha_values = alpha;
    if (!statements.empty()) {
      cfg.statements.clear();
      for (const std::string& id : statements) {
        const auto st = tlab::statement_from_id(id);
        if (!st) throw tlab::Error(tlab::ErrorCode::Parse, "unknown statement id '" + id + "'");
        cfg.statements.push_back(*st);
      }
    }
    return cfg;
  }
};

void print_failures(const tlab::SuiteResult& result) {
  for (std::size_t i : result.hard_failures) {
    const tlab::BoundReport& r = result.reports[i];
    std::cerr << "FAIL " << r.statement << " " << r.space << " p=" << tlab::format_double(r.p)
              << " lhs=" << tlab::format_double(r.lhs) << " rhs=" << tlab::format_double(r.rhs)
              << " slack=" << tlab::format_double(r.slack_ratio);
    for (const std::string& note : r.notes) std::cerr << " [" << note << "]";
    std::cerr << "\n";
  }
}

int run(const tlab::RunConfig& cfg) {
  const tlab::SuiteResult result = tlab::evaluate_suite(cfg);
  tlab::write_outputs(result, cfg.output);
  std::size_t heuristic = 0;
  for (const auto& r : result.reports) heuristic += r.heuristic ? 1 : 0;
  std::cout << result.reports.size() << " reports, " << result.hard_failures.size() << " hard failures, "
            << heuristic << " heuristic; written to " << cfg.output.string() << "\n";
  print_failures(result);
  return result.exit_code();
}

int describe(const SpaceArgs& args) {
  const tlab::MetricMeasureSpace space = args.build();
  const tlab::HeatSemigroup heat(space);
  const tlab::CheegerEstimate h = tlab::cheeger(
      space, space.size() <= tlab::kMaxBruteForcePoints ? tlab::CheegerMethod::BruteForce
                                                        : tlab::CheegerMethod::SweepCut);
  std::cout << "space     " << space.name() << "\n"
            << "n         " << space.size() << "\n"
            << "mass      " << tlab::format_double(space.total_mass()) << "\n"
            << "diameter  " << tlab::format_double(space.diameter()) << "\n"
            << "K         " << tlab::format_double(space.curvature()) << "\n"
            << "lambda_1  " << tlab::format_double(heat.spectral_gap()) << "\n"
            << "cheeger   [" << tlab::format_double(h.lower) << ", " << tlab::format_double(h.upper) << "] ("
            << tlab::to_string(h.method) << ")\n";
  return 0;
}

int spectrum(const SpaceArgs& args, tlab::Index count, const std::string& out) {
  const tlab::MetricMeasureSpace space = args.build();
  const tlab::Index k = count > 0 ? std::min(count, space.size()) : space.size();
  const tlab::SpectralDecomposition s = tlab::spectrum(space, k);
  std::vector<double> idx, lambda;
  for (tlab::Index i = 0; i < s.size(); ++i) {
    idx.push_back(static_cast<double>(i));
    lambda.push_back(s.eigenvalues[i]);
  }
  const std::string csv = tlab::curve_to_csv("k", "lambda", idx, lambda);
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw tlab::Error(tlab::ErrorCode::InvalidArgument, "cannot write " + out);
    f << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-flow and transport inequality checks on discrete metric measure spaces"};
  app.require_subcommand(1);

  SpaceArgs describe_args;
  CLI::App* describe_cmd = app.add_subcommand("describe", "print size, mass, diameter, lambda_1 and Cheeger bounds");
  describe_args.attach(*describe_cmd);

  SpaceArgs spectrum_args;
  tlab::Index spectrum_count = 0;
  std::string spectrum_out;
  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "print the Laplacian spectrum as CSV");
  spectrum_args.attach(*spectrum_cmd);
  spectrum_cmd->add_option("--count", spectrum_count, "number of eigenvalues (default all)");
  spectrum_cmd->add_option("--out", spectrum_out, "CSV file instead of stdout");

  RunArgs verify_args;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run statement checks and write reports");
  verify_args.attach(*verify_cmd);

  RunArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "write g(t), spectrum and HK-vs-alpha curves");
  sweep_args.attach(*sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*describe_cmd) {
      if (!describe_args.given()) throw tlab::Error(tlab::ErrorCode::Parse, "describe needs --catalog or --space-file");
      return describe(describe_args);
    }
    if (*spectrum_cmd) {
      if (!spectrum_args.given()) throw tlab::Error(tlab::ErrorCode::Parse, "spectrum needs --catalog or --space-file");
      return spectrum(spectrum_args, spectrum_count, spectrum_out);
    }
    if (*verify_cmd) return run(verify_args.resolve());
    if (*sweep_cmd) {
      tlab::RunConfig cfg = sweep_args.resolve();
      cfg.statements = {tlab::Statement::Step1Sweep};
      if (cfg.alpha_values.empty()) cfg.alpha_values = {1e-2, 1e-1, 1.0, 1e1, 1e2};
      return run(cfg);
    }
  } catch (const tlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == tlab::ErrorCode::Parse ? kExitParse : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
