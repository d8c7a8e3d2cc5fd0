#include "tlab/suite.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>

#include "tlab/report.hpp"

namespace tlab {

namespace {

struct TestFunction {
  std::string label;
  Vector values;
};

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

Vector zero_mean(const Vector& f, const Vector& m) {
  return f.array() - f.dot(m) / m.sum();
}

std::vector<TestFunction> test_functions(const HeatSemigroup& heat, int count, std::mt19937_64& rng) {
  const Vector& m = heat.measure();
  std::vector<TestFunction> out;
  out.push_back({"phi1", heat.spectrum().eigenfunctions.col(1)});
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < count; ++i) {
    Vector f(m.size());
    for (Index j = 0; j < f.size(); ++j) f[j] = unit(rng);
    f = zero_mean(f, m);
    if (f.cwiseAbs().maxCoeff() == 0.0) f[0] = 1.0, f = zero_mean(f, m);
    out.push_back({"random" + std::to_string(i), std::move(f)});
  }
  return out;
}

void tag(BoundReport& r, const std::string& label) { r.notes.push_back("input=" + label); }

void append(std::vector<BoundReport>& dst, std::vector<BoundReport> src, const std::string& label) {
  for (BoundReport& r : src) {
    tag(r, label);
    dst.push_back(std::move(r));
  }
}

std::vector<double> pick_grid(const RunConfig& cfg, const Verifier& v, int points) {
  if (cfg.t_grid) return *cfg.t_grid;
  return v.default_grid(points);
}

void run_space(const RunConfig& cfg, std::size_t index, const MetricMeasureSpace& space, std::mt19937_64& rng,
               SuiteResult& result) {
  VerifyOptions options;
  options.mean_policy = cfg.mean_policy;
  options.hk = cfg.solver;
  const Verifier v(space, options);
  const HeatSemigroup& heat = v.heat();
  const SpectralDecomposition& spec = heat.spectrum();
  const std::string prefix = "s" + std::to_string(index) + "_" + slug(space.name());

  {
    std::vector<double> k(static_cast<std::size_t>(spec.size()));
    std::vector<double> lambda(k.size());
    for (Index i = 0; i < spec.size(); ++i) {
      k[static_cast<std::size_t>(i)] = static_cast<double>(i);
      lambda[static_cast<std::size_t>(i)] = spec.eigenvalues[i];
    }
    result.files.push_back({std::filesystem::path("curves") / ("spectrum_" + prefix + ".csv"),
                            curve_to_csv("k", "lambda", k, lambda)});
  }

  const std::vector<TestFunction> functions = test_functions(heat, cfg.random_functions, rng);
  const std::vector<double> grid = pick_grid(cfg, v, cfg.t_points);
  const std::vector<double> hk_grid = pick_grid(cfg, v, cfg.hk_t_points);
  const Index pairs = std::min<Index>(cfg.eigenpairs, spec.size() - 1);

  if (!cfg.alpha_values.empty()) {
    const SignedDensity sd(functions.front().values, space.measure());
    std::vector<double> hk;
    for (double alpha : cfg.alpha_values) {
      hk.push_back(hellinger_kantorovich(space, sd.positive(), sd.negative(), alpha, cfg.solver).distance);
    }
    result.files.push_back({std::filesystem::path("curves") / ("hk_alpha_" + prefix + ".csv"),
                            curve_to_csv("alpha", "hk", cfg.alpha_values, hk)});
  }

  auto& out = result.reports;
  for (Statement st : cfg.statements) {
    switch (st) {
      case Statement::Indeterminacy:
        for (const auto& f : functions) append(out, {v.indeterminacy(f.values)}, f.label);
        break;
      case Statement::IndeterminacyP:
        for (double p : cfg.p_values) {
          if (p <= 1.0) continue;
          for (const auto& f : functions) append(out, {v.indeterminacy_p(f.values, p)}, f.label);
        }
        break;
      case Statement::EigenBound:
        for (Index k = 1; k <= pairs; ++k) {
          append(out, {v.eig_bound(spec.eigenvalues[k], spec.eigenfunctions.col(k))}, "phi" + std::to_string(k));
        }
        break;
      case Statement::EigenBoundP:
        for (double p : cfg.p_values) {
          if (p <= 1.0) continue;
          for (Index k = 1; k <= pairs; ++k) {
            append(out, {v.eig_bound_p(spec.eigenvalues[k], spec.eigenfunctions.col(k), p)},
                   "phi" + std::to_string(k));
          }
        }
        break;
      case Statement::HkIndeterminacy:
        for (const auto& f : functions) append(out, v.hk_indeterminacy(f.values, hk_grid), f.label);
        break;
      case Statement::LuiseSavareWasserstein:
        for (double p : cfg.p_values) {
          if (p > 2.0) continue;
          for (const auto& f : functions) {
            const SignedDensity sd(f.values, space.measure());
            append(out, v.luise_savare_wasserstein(sd.positive(), sd.negative(), p, hk_grid), f.label);
          }
        }
        break;
      case Statement::LuiseSavareHk:
        for (const auto& f : functions) {
          const SignedDensity sd(f.values, space.measure());
          append(out, v.luise_savare_hk(sd.positive(), sd.negative(), hk_grid), f.label);
        }
        break;
      case Statement::HeatPerimeter:
        for (const auto& f : functions) {
          const SignedDensity sd(f.values, space.measure());
          append(out, v.heat_perimeter(sd.positive_set(), grid), f.label);
        }
        break;
      case Statement::SqrtHeat:
        for (const auto& f : functions) {
          std::vector<BoundReport> rs;
          for (double t : grid) rs.push_back(v.sqrt_heat(f.values, t));
          append(out, std::move(rs), f.label);
        }
        break;
      case Statement::NormCheeger:
        for (const auto& f : functions) append(out, {v.norm_cheeger(f.values)}, f.label);
        break;
      case Statement::Step1Sweep:
        for (const auto& f : functions) {
          const Step1Curve curve = v.step1_curve(f.values, grid);
          result.files.push_back(
              {std::filesystem::path("curves") / ("step1_" + prefix + "_" + f.label + ".csv"),
               curve_to_csv("t", "g", curve.t, curve.g)});
          append(out, {v.step1_sweep(f.values, grid)}, f.label);
        }
        break;
    }
  }
}

/// A space that cannot be built is a configuration error.
MetricMeasureSpace build_space(const SpaceSource& src) {
  try {
    return src.build();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(ErrorCode::Parse, "space " + src.describe() + ": " + e.what());
  }
}

}  // namespace

SuiteResult evaluate_suite(const RunConfig& config) {
  SuiteResult result;
  std::mt19937_64 rng(config.seed);
  if (!config.statements.empty()) {
    for (std::size_t i = 0; i < config.spaces.size(); ++i) {
      const MetricMeasureSpace space = build_space(config.spaces[i]);
      run_space(config, i, space, rng, result);
    }
  }
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const BoundReport& r = result.reports[i];
    if (!r.pass && !r.heuristic) result.hard_failures.push_back(i);
  }
  result.files.insert(result.files.begin(), {{"reports.json", reports_to_json(result.reports)},
                                             {"reports.csv", reports_to_csv(result.reports)}});
  return result;
}

void write_outputs(const SuiteResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "curves");
  for (const OutputFile& f : result.files) {
    const std::filesystem::path path = dir / f.path;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << f.contents;
  }
}

int run_suite(const RunConfig& config) {
  const SuiteResult result = evaluate_suite(config);
  write_outputs(result, config.output);
  return result.exit_code();
}

}  // namespace tlab
