#include "tlab/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace tlab {

namespace {

constexpr double kMeanTolerance = 1e-9;
constexpr double kIdentityTolerance = 1e-8;

const std::array<std::pair<Statement, const char*>, 11> kStatementIds{{
    {Statement::Indeterminacy, "thm_1_1"},
    {Statement::IndeterminacyP, "cor_3_3"},
    {Statement::EigenBound, "thm_1_4"},
    {Statement::EigenBoundP, "cor_4_2"},
    {Statement::HkIndeterminacy, "thm_3_4"},
    {Statement::LuiseSavareWasserstein, "prop_2_5_wass"},
    {Statement::LuiseSavareHk, "prop_2_5_hk"},
    {Statement::HeatPerimeter, "prop_2_7"},
    {Statement::SqrtHeat, "prop_3_1"},
    {Statement::NormCheeger, "lem_3_2"},
    {Statement::Step1Sweep, "step1_sweep"},
}};

double integrate(const Vector& values, const Vector& measure) { return values.dot(measure); }

/// Heat output of a nonnegative input, with rounding-level negatives cut.
Vector nonnegative(Vector v) { return v.cwiseMax(0.0); }

/// He_p(H_t rho0 m, H_t rho1 m). The pointwise difference comes from evolving
/// rho0 - rho1 directly, so it keeps its relative accuracy after both
/// measures have relaxed to equilibrium; that matters when it is multiplied
/// by R_K(t)^{1/2}, which grows exponentially for K > 0.
double heat_hellinger(const HeatSemigroup& heat, const Vector& rho0, const Vector& rho1, double t, double p) {
  const Vector& m = heat.measure();
  const Vector a = nonnegative(heat.apply(rho0, t));
  const Vector b = nonnegative(heat.apply(rho1, t));
  const double mass0 = rho0.dot(m);
  const double mass1 = rho1.dot(m);
  const bool balanced = std::abs(mass0 - mass1) <= 1e-9 * std::max(mass0, mass1);
  const Vector d = balanced ? heat.apply_zero_mean(rho0 - rho1, t) : Vector(a - b);
  double sum = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double gap = std::abs(d[i]);
    const double lo = std::min(a[i], b[i]);
    double term = gap;
    if (p != 1.0 && lo > 0.0) {
      // a^{1/p} - b^{1/p} = lo^{1/p} ((1 + gap/lo)^{1/p} - 1) without cancellation.
      term = std::pow(std::pow(lo, 1.0 / p) * std::expm1(std::log1p(gap / lo) / p), p);
    }
    sum += term * m[i];
  }
  return std::pow(sum, 1.0 / p);
}

void add(BoundReport& r, const std::string& name, double value) { r.parameters.emplace_back(name, value); }

const char* kIndFlatFormula = "C = sqrt(pi) / (27 sqrt(2))";
const char* kIndNegativeFormula = "C = (1 - (2 pi)^(-1/4)) h / (8 h + 2 |K|^(1/2))";

}  // namespace

// --- formulas ----------------------------------------------------------------------

double d_ratio(double l1, double linf, double per, double curvature) {
  if (!(l1 > 0.0) || !(curvature < 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "D_K needs ||f||_1 > 0 and K < 0");
  }
  return linf * per / (l1 * std::sqrt(-curvature));
}

double optimal_s(double d) {
  if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "D_K must be positive");
  return 1.0 / (8.0 * d + 1.0);
}

double optimal_time(TimeRule rule, const TimeInputs& in) {
  switch (rule) {
    case TimeRule::IndicatorFlat: {
      if (!(in.per > 0.0)) throw Error(ErrorCode::InvalidArgument, "perimeter must be positive");
      if (!(in.l1 > 0.0) || !(in.linf > 0.0)) throw Error(ErrorCode::InvalidArgument, "norms must be positive");
      const double ratio = in.l1 / (in.linf * in.per);
      return std::numbers::pi / 324.0 * ratio * ratio;
    }
    case TimeRule::IndicatorNegative: {
      if (!(in.per > 0.0)) throw Error(ErrorCode::InvalidArgument, "perimeter must be positive");
      const double s = optimal_s(d_ratio(in.l1, in.linf, in.per, in.curvature));
      return std::log1p(-s * s) / (2.0 * in.curvature);
    }
    case TimeRule::Eigen: {
      if (!(in.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigenvalue must be positive");
      if (in.curvature >= 0.0) return 1.0 / (2.0 * in.lambda);
      return std::log(in.lambda / (in.lambda - in.curvature)) / (2.0 * in.curvature);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown time rule");
}

double step1_g(double curvature, double t, double l1, double linf, double per) {
  const double r = r_profile(curvature, t);
  const double j = j_profile(curvature, t);
  return std::sqrt(r) * l1 - 2.0 * std::sqrt(r * j * per * l1 * linf);
}

double g1(double s, double d) {
  const double c = std::pow(2.0, 1.25) / std::pow(std::numbers::pi, 0.25);
  return d * s * (1.0 - c * std::sqrt(d * std::atanh(s)));
}

double g2(double s, double d) {
  const double c = std::pow(2.0, 1.25) / std::pow(std::numbers::pi, 0.25);
  return d * s * (1.0 - c * std::sqrt(d * s / (1.0 - s)));
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw Error(ErrorCode::InvalidArgument, "invalid log grid");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k < n; ++k) out[k] = std::exp(a + (b - a) * k / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// --- reports -----------------------------------------------------------------------

std::string statement_id(Statement s) {
  for (const auto& [statement, id] : kStatementIds)
    if (statement == s) return id;
  return "unknown";
}

std::optional<Statement> statement_from_id(const std::string& id) {
  for (const auto& [statement, name] : kStatementIds)
    if (id == name) return statement;
  return std::nullopt;
}

const std::vector<Statement>& all_statements() {
  static const std::vector<Statement> all = [] {
    std::vector<Statement> out;
    for (const auto& entry : kStatementIds) out.push_back(entry.first);
    return out;
  }();
  return all;
}

double BoundReport::parameter(const std::string& name) const {
  for (const auto& [key, value] : parameters)
    if (key == name) return value;
  return std::numeric_limits<double>::quiet_NaN();
}

void settle(BoundReport& r) {
  const bool at_least = r.direction == Direction::AtLeast;
  const double big = at_least ? r.lhs : r.rhs;
  const double small = at_least ? r.rhs : r.lhs;
  if (std::isnan(big) || std::isnan(small)) {
    r.slack_ratio = std::numeric_limits<double>::quiet_NaN();
    r.pass = false;
    r.tie = false;
    return;
  }
  if (big == 0.0 && small == 0.0) {
    r.slack_ratio = 1.0;
  } else if (small <= 0.0 && big > 0.0) {
    r.slack_ratio = kInfinity;
  } else {
    r.slack_ratio = big / small;
  }
  const double violation = (std::isinf(big) && big > 0.0) ? -kInfinity : small - big;
  r.pass = violation <= r.tolerance;
  r.tie = violation > 0.0 && violation <= kTieTolerance;
}

// --- verifier ----------------------------------------------------------------------

Verifier::Verifier(const MetricMeasureSpace& space, VerifyOptions options)
    : space_(space), options_(std::move(options)) {}

const HeatSemigroup& Verifier::heat() const {
  if (!heat_) heat_ = std::make_unique<HeatSemigroup>(space_);
  return *heat_;
}

const CheegerEstimate& Verifier::cheeger_estimate() const {
  if (!cheeger_) {
    cheeger_ = cheeger(space_, space_.size() <= kMaxBruteForcePoints ? CheegerMethod::BruteForce
                                                                     : CheegerMethod::SweepCut);
  }
  return *cheeger_;
}

std::vector<double> Verifier::default_grid(int points) const {
  const double gap = heat().spectral_gap();
  return log_grid(1e-6 / gap, 1e2 / gap, points);
}

BoundReport Verifier::make_report(Statement s, Direction d) const {
  BoundReport r;
  r.statement = statement_id(s);
  r.space = space_.name();
  r.n = space_.size();
  r.curvature = space_.curvature();
  r.direction = d;
  r.tolerance = kBoundTolerance;
  r.tolerance_source = "absolute 1e-8";
  return r;
}

Vector Verifier::centered(const Vector& f, BoundReport& report) const {
  if (f.size() != space_.size()) throw Error(ErrorCode::InvalidArgument, "function size mismatch");
  if (!f.allFinite()) throw Error(ErrorCode::InvalidArgument, "function has non-finite values");
  const double linf = f.cwiseAbs().maxCoeff();
  if (linf == 0.0) throw Error(ErrorCode::InvalidArgument, "function vanishes identically");
  const double mean = integrate(f, space_.measure()) / space_.total_mass();
  if (std::abs(mean) <= kMeanTolerance * linf) return f;
  if (options_.mean_policy == MeanPolicy::Reject) {
    throw Error(ErrorCode::InvalidArgument, "function must have zero mean");
  }
  report.notes.push_back("nonzero mean subtracted");
  add(report, "mean_subtracted", mean);
  Vector g = f.array() - mean;
  if (g.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorCode::InvalidArgument, "function is constant");
  return g;
}

BoundReport Verifier::indeterminacy(const Vector& f) const {
  BoundReport r = make_report(Statement::Indeterminacy, Direction::AtLeast);
  const SignedDensity sd(centered(f, r), space_.measure());
  const double per = perimeter(space_, sd.positive_set());
  const double w1 = wasserstein(space_, sd.positive(), sd.negative(), 1.0).distance;
  const double k = space_.curvature();

  double c = 0.0;
  if (k >= 0.0) {
    c = constant_ind(k, 1.0);
    r.constant_formula = kIndFlatFormula;
  } else {
    const CheegerEstimate& h = cheeger_estimate();
    c = constant_ind(k, h.upper);
    r.constant_formula = kIndNegativeFormula;
    add(r, "h", h.upper);
    if (h.method == CheegerMethod::SweepCut) r.notes.push_back("h from sweep-cut upper bound");
  }
  r.lhs = w1 * per;
  r.rhs = c * (sd.l1() / sd.linf()) * sd.l1();
  add(r, "W1", w1);
  add(r, "Per", per);
  add(r, "l1", sd.l1());
  add(r, "linf", sd.linf());
  add(r, "C", c);

  if (per > 0.0 && options_.step1_points > 0) {
    const Step1Curve curve = step1_curve(sd.values(), default_grid(options_.step1_points));
    add(r, "step1_max_g", curve.max_g);
    add(r, "step1_argmax_t", curve.argmax_t);
    add(r, "t_bar", curve.t_bar);
    add(r, "g_t_bar", curve.g_at_t_bar);
  }
  settle(r);
  if (k < 0.0 && cheeger_estimate().method == CheegerMethod::SweepCut && !r.pass) {
    r.heuristic = true;
    r.notes.push_back("inconclusive: rhs built from an upper bound on h");
  }
  return r;
}

BoundReport Verifier::indeterminacy_p(const Vector& f, double p) const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "exponent p must be >= 1");
  if (p == 1.0) return indeterminacy(f);
  BoundReport r = make_report(Statement::IndeterminacyP, Direction::AtLeast);
  r.p = p;
  const SignedDensity sd(centered(f, r), space_.measure());
  const double per = perimeter(space_, sd.positive_set());
  const double wp = wasserstein(space_, sd.positive(), sd.negative(), p).distance;
  const double w1 = wasserstein(space_, sd.positive(), sd.negative(), 1.0).distance;
  const double k = space_.curvature();
  double c = 0.0;
  if (k >= 0.0) {
    c = constant_ind(k, 1.0);
    r.constant_formula = std::string("2^((p-1)/p) ") + kIndFlatFormula;
  } else {
    const CheegerEstimate& h = cheeger_estimate();
    c = constant_ind(k, h.upper);
    r.constant_formula = std::string("2^((p-1)/p) ") + kIndNegativeFormula;
    add(r, "h", h.upper);
  }
  const double factor = std::pow(2.0, (p - 1.0) / p);
  r.lhs = wp * per;
  r.rhs = factor * c * (sd.l1() / sd.linf()) * std::pow(sd.l1(), 1.0 / p);

  // W_p ||f||_1^{1-1/p} / 2^{1-1/p} >= W_1 (Hoelder at mass ||f||_1 / 2).
  const double holder_lhs = wp * std::pow(sd.l1(), 1.0 - 1.0 / p) / std::pow(2.0, 1.0 - 1.0 / p);
  add(r, "Wp", wp);
  add(r, "W1", w1);
  add(r, "Per", per);
  add(r, "l1", sd.l1());
  add(r, "linf", sd.linf());
  add(r, "C", c);
  add(r, "holder_lhs", holder_lhs);
  add(r, "holder_rhs", w1);
  settle(r);
  if (holder_lhs < w1 - kBoundTolerance) {
    r.pass = false;
    r.notes.push_back("Hoelder relation between W_p and W_1 violated");
  }
  if (k < 0.0 && cheeger_estimate().method == CheegerMethod::SweepCut && !r.pass) r.heuristic = true;
  return r;
}

BoundReport Verifier::eig_bound(double lambda, const Vector& f, std::optional<double> bound) const {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigenvalue must be positive");
  const double m_bound = bound.value_or(lambda);
  if (!(m_bound > 0.0) || m_bound > lambda) throw Error(ErrorCode::InvalidArgument, "need 0 < M <= lambda");
  BoundReport r = make_report(Statement::EigenBound, Direction::AtLeast);
  const SignedDensity sd(centered(f, r), space_.measure());
  const double k = space_.curvature();
  const double w1 = wasserstein(space_, sd.positive(), sd.negative(), 1.0).distance;
  const double c = constant_eig(k, m_bound);
  r.lhs = w1;
  r.rhs = c * sd.l1() / std::sqrt(lambda);
  r.constant_formula = k >= 0.0 ? "C = e^(-1/2)" : "C = (1 - K/M)^(M/(2K) - 1/2)";

  // ||H_t f+ - H_t f-||_1 = e^{-lambda t} ||f||_1 at t-bar.
  const double t_bar = optimal_time(TimeRule::Eigen, {.curvature = k, .lambda = lambda});
  const Vector hp = heat().apply(sd.positive(), t_bar);
  const Vector hm = heat().apply(sd.negative(), t_bar);
  const double identity_lhs = (hp - hm).cwiseAbs().dot(space_.measure());
  const double identity_rhs = std::exp(-lambda * t_bar) * sd.l1();
  const double identity_error = std::abs(identity_lhs - identity_rhs) / identity_rhs;

  const Vector residual = laplacian_apply(space_, sd.values()) + lambda * sd.values();
  const double norm = std::sqrt(sd.values().cwiseAbs2().dot(space_.measure()));
  const double eigen_residual = std::sqrt(residual.cwiseAbs2().dot(space_.measure())) / norm;

  add(r, "lambda", lambda);
  add(r, "M", m_bound);
  add(r, "C", c);
  add(r, "l1", sd.l1());
  add(r, "t_bar", t_bar);
  add(r, "step1_at_t_bar", std::sqrt(r_profile(k, t_bar)) * identity_rhs);
  add(r, "identity_lhs", identity_lhs);
  add(r, "identity_rhs", identity_rhs);
  add(r, "identity_rel_error", identity_error);
  add(r, "eigen_residual", eigen_residual);
  add(r, "w1_sqrt_lambda_over_l1", w1 * std::sqrt(lambda) / sd.l1());
  settle(r);
  if (!(identity_error <= kIdentityTolerance)) {
    r.pass = false;
    r.notes.push_back("heat identity at t_bar off by more than 1e-8 relative");
  }
  return r;
}

BoundReport Verifier::eig_bound_p(double lambda, const Vector& f, double p, std::optional<double> bound) const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "exponent p must be >= 1");
  if (p == 1.0) return eig_bound(lambda, f, bound);
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigenvalue must be positive");
  const double m_bound = bound.value_or(lambda);
  if (!(m_bound > 0.0) || m_bound > lambda) throw Error(ErrorCode::InvalidArgument, "need 0 < M <= lambda");
  BoundReport r = make_report(Statement::EigenBoundP, Direction::AtLeast);
  r.p = p;
  const SignedDensity sd(centered(f, r), space_.measure());
  const double k = space_.curvature();
  const double wp = wasserstein(space_, sd.positive(), sd.negative(), p).distance;
  const double c = constant_eig(k, m_bound);
  r.lhs = wp;
  r.rhs = std::pow(2.0, (p - 1.0) / p) * c * std::pow(sd.l1(), 1.0 / p) / std::sqrt(lambda);
  r.constant_formula = k >= 0.0 ? "2^((p-1)/p) C, C = e^(-1/2)" : "2^((p-1)/p) C, C = (1 - K/M)^(M/(2K) - 1/2)";
  add(r, "lambda", lambda);
  add(r, "M", m_bound);
  add(r, "C", c);
  add(r, "l1", sd.l1());
  settle(r);
  return r;
}

std::vector<BoundReport> Verifier::hk_indeterminacy(const Vector& f, const std::vector<double>& times) const {
  if (f.size() != space_.size()) throw Error(ErrorCode::InvalidArgument, "function size mismatch");
  const SignedDensity sd(f, space_.measure());
  if (sd.linf() == 0.0) throw Error(ErrorCode::InvalidArgument, "function vanishes identically");
  const double per = perimeter(space_, sd.positive_set());
  const double k = space_.curvature();
  std::vector<BoundReport> out;
  for (double t : times) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be positive");
    BoundReport r = make_report(Statement::HkIndeterminacy, Direction::AtLeast);
    const double rk = r_profile(k, t);
    const double jk = j_profile(k, t);
    const double alpha = 4.0 * rk;
    const HellingerKantorovichResult hk =
        hellinger_kantorovich(space_, sd.positive(), sd.negative(), alpha, options_.hk);
    const double inner = sd.l1() - 2.0 * std::sqrt(jk * per * sd.l1() * sd.linf());
    r.lhs = hk.distance;
    r.vacuous = inner < 0.0;
    r.rhs = r.vacuous ? 0.0 : std::sqrt(inner);
    r.tolerance = kBoundTolerance + hk.bias_bound;
    r.tolerance_source = "absolute 1e-8 + 10 eps entropic bias";
    r.constant_formula = "rhs = (||f||_1 - 2 (J_K(t) Per ||f||_1 ||f||_inf)^(1/2))^(1/2)";
    add(r, "t", t);
    add(r, "alpha", alpha);
    add(r, "R_K", rk);
    add(r, "J_K", jk);
    add(r, "inner", inner);
    add(r, "Per", per);
    add(r, "l1", sd.l1());
    add(r, "linf", sd.linf());
    add(r, "epsilon", hk.solution.epsilon);
    add(r, "hk_lower", std::sqrt(std::max(hk.solution.dual_bound, 0.0)));
    if (r.vacuous) r.notes.push_back("vacuous: negative radicand");
    if (!hk.solution.converged) r.notes.push_back("entropic solver hit its iteration cap");
    settle(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundReport> Verifier::luise_savare_wasserstein(const Vector& rho0, const Vector& rho1, double p,
                                                            const std::vector<double>& times) const {
  if (!(p >= 1.0 && p <= 2.0)) throw Error(ErrorCode::InvalidArgument, "exponent p must lie in [1, 2]");
  const double w = wasserstein(space_, rho0, rho1, p).distance;
  const double k = space_.curvature();
  std::vector<BoundReport> out;
  for (double t : times) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be positive");
    BoundReport r = make_report(Statement::LuiseSavareWasserstein, Direction::AtLeast);
    r.p = p;
    const double he = heat_hellinger(heat(), rho0, rho1, t, p);
    const double rk = r_profile(k, t);
    r.lhs = w;
    r.rhs = p * std::sqrt(rk) * he;
    r.constant_formula = "rhs = p R_K(t)^(1/2) He_p(H_t mu0, H_t mu1)";
    add(r, "t", t);
    add(r, "R_K", rk);
    add(r, "He_p", he);
    if (std::isinf(w)) {
      r.vacuous = true;
      r.notes.push_back("vacuous: unequal masses give W_p = +inf");
    }
    settle(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundReport> Verifier::luise_savare_hk(const Vector& rho0, const Vector& rho1,
                                                   const std::vector<double>& times) const {
  const double k = space_.curvature();
  std::vector<BoundReport> out;
  for (double t : times) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be positive");
    BoundReport r = make_report(Statement::LuiseSavareHk, Direction::AtLeast);
    r.p = 2.0;
    const double rk = r_profile(k, t);
    const HellingerKantorovichResult hk = hellinger_kantorovich(space_, rho0, rho1, 4.0 * rk, options_.hk);
    const double he = heat_hellinger(heat(), rho0, rho1, t, 2.0);
    r.lhs = hk.distance;
    r.rhs = he;
    r.tolerance = kBoundTolerance + hk.bias_bound;
    r.tolerance_source = "absolute 1e-8 + 10 eps entropic bias";
    r.constant_formula = "lhs = HK_{4 R_K(t)}, rhs = He_2(H_t mu0, H_t mu1)";
    add(r, "t", t);
    add(r, "alpha", 4.0 * rk);
    add(r, "epsilon", hk.solution.epsilon);
    add(r, "hk_lower", std::sqrt(std::max(hk.solution.dual_bound, 0.0)));
    if (!hk.solution.converged) r.notes.push_back("entropic solver hit its iteration cap");
    settle(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundReport> Verifier::heat_perimeter(const PointSet& set, const std::vector<double>& times) const {
  const double per = perimeter(space_, set);
  Vector chi(space_.size());
  for (Index i = 0; i < space_.size(); ++i) chi[i] = set[i] ? 1.0 : 0.0;
  const double k = space_.curvature();
  std::vector<BoundReport> out;
  for (double t : times) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be positive");
    BoundReport r = make_report(Statement::HeatPerimeter, Direction::AtMost);
    const Vector h = heat().apply(chi, t);
    double outside = 0.0;
    for (Index i = 0; i < space_.size(); ++i)
      if (!set[i]) outside += h[i] * space_.measure()[i];
    const double jk = j_profile(k, t);
    r.lhs = outside;
    r.rhs = 0.5 * jk * per;
    r.constant_formula = "rhs = J_K(t) Per(A) / 2";
    add(r, "t", t);
    add(r, "J_K", jk);
    add(r, "Per", per);
    add(r, "mass_A", set_mass(space_, set));
    settle(r);
    out.push_back(std::move(r));
  }
  return out;
}

BoundReport Verifier::sqrt_heat(const Vector& f, double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "time must be positive");
  if (f.size() != space_.size()) throw Error(ErrorCode::InvalidArgument, "function size mismatch");
  BoundReport r = make_report(Statement::SqrtHeat, Direction::AtMost);
  const SignedDensity sd(f, space_.measure());
  const double per = perimeter(space_, sd.positive_set());
  const Vector hp = nonnegative(heat().apply(sd.positive(), t));
  const Vector hm = nonnegative(heat().apply(sd.negative(), t));
  const double jk = j_profile(space_.curvature(), t);
  r.lhs = hp.cwiseProduct(hm).cwiseSqrt().dot(space_.measure());
  r.rhs = std::sqrt(jk * per * sd.l1() * sd.linf());
  r.constant_formula = "rhs = (J_K(t) Per ||f||_1 ||f||_inf)^(1/2)";
  add(r, "t", t);
  add(r, "J_K", jk);
  add(r, "Per", per);
  add(r, "l1", sd.l1());
  add(r, "linf", sd.linf());
  settle(r);
  return r;
}

BoundReport Verifier::norm_cheeger(const Vector& f) const {
  BoundReport r = make_report(Statement::NormCheeger, Direction::AtLeast);
  const SignedDensity sd(centered(f, r), space_.measure());
  const double per = perimeter(space_, sd.positive_set());
  const CheegerEstimate& h = cheeger_estimate();
  r.lhs = sd.linf() * per / sd.l1();
  r.rhs = 0.5 * h.upper;
  r.constant_formula = "rhs = h(X) / 2";
  r.heuristic = h.method == CheegerMethod::SweepCut;
  if (r.heuristic) r.notes.push_back("h from sweep-cut upper bound");
  add(r, "h", h.upper);
  add(r, "Per", per);
  add(r, "l1", sd.l1());
  add(r, "linf", sd.linf());
  settle(r);
  return r;
}

Step1Curve Verifier::step1_curve(const Vector& f, const std::vector<double>& times) const {
  BoundReport scratch;
  const SignedDensity sd(centered(f, scratch), space_.measure());
  const double per = perimeter(space_, sd.positive_set());
  const double k = space_.curvature();
  Step1Curve curve;
  curve.max_g = -kInfinity;
  for (double t : times) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be positive");
    const double g = step1_g(k, t, sd.l1(), sd.linf(), per);
    curve.t.push_back(t);
    curve.g.push_back(g);
    if (g > curve.max_g) {
      curve.max_g = g;
      curve.argmax_t = t;
    }
  }
  if (per > 0.0) {
    const TimeInputs in{.l1 = sd.l1(), .linf = sd.linf(), .per = per, .curvature = k};
    curve.t_bar = optimal_time(k >= 0.0 ? TimeRule::IndicatorFlat : TimeRule::IndicatorNegative, in);
    curve.g_at_t_bar = step1_g(k, curve.t_bar, sd.l1(), sd.linf(), per);
  }
  return curve;
}

BoundReport Verifier::step1_sweep(const Vector& f, const std::vector<double>& times) const {
  BoundReport r = make_report(Statement::Step1Sweep, Direction::AtLeast);
  const SignedDensity sd(centered(f, r), space_.measure());
  const Step1Curve curve = step1_curve(sd.values(), times);
  r.lhs = wasserstein(space_, sd.positive(), sd.negative(), 1.0).distance;
  r.rhs = curve.max_g;
  r.constant_formula = "rhs = max_t R_K^(1/2) ||f||_1 - 2 (R_K J_K Per ||f||_1 ||f||_inf)^(1/2)";
  add(r, "argmax_t", curve.argmax_t);
  add(r, "t_bar", curve.t_bar);
  add(r, "g_t_bar", curve.g_at_t_bar);
  add(r, "grid_points", static_cast<double>(times.size()));
  settle(r);
  return r;
}

// --- free functions ------------------------------------------------------------------

BoundReport verify_indeterminacy(const MetricMeasureSpace& space, const Vector& f) {
  return Verifier(space).indeterminacy(f);
}

BoundReport verify_indeterminacy_p(const MetricMeasureSpace& space, const Vector& f, double p) {
  return Verifier(space).indeterminacy_p(f, p);
}

BoundReport verify_eig_bound(const MetricMeasureSpace& space, double lambda, const Vector& f,
                             std::optional<double> bound) {
  return Verifier(space).eig_bound(lambda, f, bound);
}

BoundReport verify_eig_bound_p(const MetricMeasureSpace& space, double lambda, const Vector& f, double p,
                               std::optional<double> bound) {
  return Verifier(space).eig_bound_p(lambda, f, p, bound);
}

std::vector<BoundReport> verify_hk_indeterminacy(const MetricMeasureSpace& space, const Vector& f,
                                                 const std::vector<double>& times) {
  return Verifier(space).hk_indeterminacy(f, times);
}

std::vector<BoundReport> verify_luise_savare(const MetricMeasureSpace& space, const Vector& rho0,
                                             const Vector& rho1, double p, const std::vector<double>& times) {
  const Verifier v(space);
  std::vector<BoundReport> out = v.luise_savare_wasserstein(rho0, rho1, p, times);
  std::vector<BoundReport> hk = v.luise_savare_hk(rho0, rho1, times);
  out.insert(out.end(), std::make_move_iterator(hk.begin()), std::make_move_iterator(hk.end()));
  return out;
}

std::vector<BoundReport> verify_heat_perimeter(const MetricMeasureSpace& space, const PointSet& set,
                                               const std::vector<double>& times) {
  return Verifier(space).heat_perimeter(set, times);
}

BoundReport verify_sqrt_heat(const MetricMeasureSpace& space, const Vector& f, double t) {
  return Verifier(space).sqrt_heat(f, t);
}

BoundReport verify_norm_cheeger(const MetricMeasureSpace& space, const Vector& f) {
  return Verifier(space).norm_cheeger(f);
}

Step1Curve step1_sweep(const MetricMeasureSpace& space, const Vector& f, const std::vector<double>& times) {
  return Verifier(space).step1_curve(f, times);
}

}  // namespace tlab
