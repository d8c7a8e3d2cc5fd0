#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "tlab/bounds.hpp"

using namespace tlab;

namespace {

constexpr double kPi = std::numbers::pi;
const double kFlatInd = std::sqrt(kPi) / (27.0 * std::sqrt(2.0));
const double kQuarter = 1.0 - std::pow(2.0 * kPi, -0.25);

Vector sample(const MetricMeasureSpace& s, const std::function<double(double)>& fn) {
  Vector f(s.size());
  for (Index i = 0; i < f.size(); ++i) f[i] = fn(s.line()->position[i]);
  return f;
}

double circle_lambda(Index n, int k) {
  const double h = 2.0 * kPi / static_cast<double>(n);
  return 2.0 * (1.0 - std::cos(k * h)) / (h * h);
}

/// Same graph with measure, conductances and boundary weights all scaled by c.
MetricMeasureSpace scaled(const MetricMeasureSpace& s, double c) {
  std::vector<Edge> edges = s.edges();
  for (Edge& e : edges) e.w *= c, e.sigma *= c;
  return MetricMeasureSpace(s.name(), s.dist(), c * s.measure(), edges, s.curvature(), s.line());
}

}  // namespace

TEST_CASE("constant_ind branches") {
  CHECK(constant_ind(0.0, 1.0) == doctest::Approx(kFlatInd).epsilon(1e-15));
  CHECK(std::abs(constant_ind(0.0, 1.0) - 0.04642) < 1e-5);
  CHECK(constant_ind(2.0, 0.3) == constant_ind(0.0, 7.0));
  CHECK(constant_ind(-1.0, 1.0) == doctest::Approx(kQuarter / 10.0).epsilon(1e-15));
  CHECK(std::abs(constant_ind(-1.0, 1.0) - 0.03684) < 1e-5);
  CHECK(constant_ind(-1e-14, 1.0) == doctest::Approx(kQuarter / 8.0).epsilon(1e-6));
  CHECK(kQuarter / 8.0 != doctest::Approx(kFlatInd));
  CHECK_THROWS_AS(constant_ind(-1.0, 0.0), Error);
  CHECK_THROWS_AS(constant_ind(0.0, -1.0), Error);
}

TEST_CASE("constant_eig branches") {
  CHECK(constant_eig(0.0, 3.0) == std::exp(-0.5));
  CHECK(std::abs(constant_eig(0.0, 1.0) - 0.60653) < 1e-5);
  CHECK(constant_eig(-2.0, 2.0) == 0.5);
  CHECK(constant_eig(-7.0, 7.0) == 0.5);
  CHECK(std::abs(constant_eig(-1e-9, 1.0) - std::exp(-0.5)) <= 1e-6);
  CHECK(std::abs(constant_eig(-1e-7, 1.0) - std::exp(-0.5)) <= 1e-6);
  CHECK(constant_eig(-1.0, 4.0) == doctest::Approx(std::pow(1.25, -2.0 - 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(constant_eig(0.0, 0.0), Error);
}

TEST_CASE("optimal times") {
  CHECK(optimal_time(TimeRule::Eigen, {.curvature = 0.0, .lambda = 4.0}) == 0.125);
  CHECK(optimal_time(TimeRule::Eigen, {.curvature = -1.0, .lambda = 4.0}) ==
        doctest::Approx(-0.5 * std::log(4.0 / 5.0)).epsilon(1e-14));
  CHECK(optimal_time(TimeRule::IndicatorFlat, {.l1 = 1.0, .linf = 1.0, .per = 1.0}) ==
        doctest::Approx(kPi / 324.0).epsilon(1e-15));
  CHECK(optimal_s(1.0) == doctest::Approx(1.0 / 9.0));
  const TimeInputs in{.l1 = 2.0, .linf = 1.5, .per = 3.0, .curvature = -0.7};
  const double d = d_ratio(in.l1, in.linf, in.per, in.curvature);
  CHECK(d == doctest::Approx(1.5 * 3.0 / (2.0 * std::sqrt(0.7))));
  const double s = optimal_s(d);
  CHECK(optimal_time(TimeRule::IndicatorNegative, in) ==
        doctest::Approx(std::log(1.0 - s * s) / (2.0 * -0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(optimal_time(TimeRule::Eigen, {.curvature = 0.0, .lambda = 0.0}), Error);
  CHECK_THROWS_AS(optimal_time(TimeRule::IndicatorFlat, {.l1 = 1.0, .linf = 1.0, .per = 0.0}), Error);
}

TEST_CASE("g at the optimal time equals the flat constant for arbitrary norms") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logu(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double l1 = std::pow(10.0, logu(rng));
    const double linf = std::pow(10.0, logu(rng));
    const double per = std::pow(10.0, logu(rng));
    const double t = optimal_time(TimeRule::IndicatorFlat, {.l1 = l1, .linf = linf, .per = per});
    const double collapsed = step1_g(0.0, t, l1, linf, per) * linf * per / (l1 * l1);
    CHECK(std::abs(collapsed - kFlatInd) <= 1e-12);
  }
  const double t = kPi / 324.0;
  CHECK(std::abs(step1_g(0.0, t, 1.0, 1.0, 1.0) - kFlatInd) <= 1e-12);
}

TEST_CASE("negative-curvature chain g1 >= g2 and the value at s-bar") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> logu(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
  for (int trial = 0; trial < 100; ++trial) {
    const double d = std::pow(10.0, logu(rng));
    for (int k = 0; k < 20; ++k) {
      const double s = unit(rng);
      CHECK(g1(s, d) >= g2(s, d) - 1e-15 * std::abs(g2(s, d)));
    }
    CHECK(std::abs(g2(optimal_s(d), d) - kQuarter * d / (8.0 * d + 1.0)) <= 1e-12);
  }
  for (double d : {0.1, 1.0, 10.0}) {
    CHECK(std::abs(g2(optimal_s(d), d) * (8.0 * d + 1.0) / d - kQuarter) <= 1e-12);
  }
}

TEST_CASE("monotonicity facts used in the proofs") {
  const std::vector<double> xs = log_grid(1e-3, 1e3, 2000);
  CHECK(xs.front() == doctest::Approx(1e-3));
  CHECK(xs.back() == doctest::Approx(1e3));
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double a = xs[i - 1];
    const double b = xs[i];
    CHECK(std::pow(a / (a + 1.0), (a + 1.0) / 2.0) < std::pow(b / (b + 1.0), (b + 1.0) / 2.0));
    CHECK(a / (8.0 * a + 1.0) < b / (8.0 * b + 1.0));
  }
}

TEST_CASE("report settling") {
  BoundReport r;
  r.direction = Direction::AtLeast;
  r.tolerance = kBoundTolerance;
  r.lhs = 3.0;
  r.rhs = 1.5;
  settle(r);
  CHECK(r.pass);
  CHECK_FALSE(r.tie);
  CHECK(r.slack_ratio == 2.0);

  r.direction = Direction::AtMost;
  settle(r);
  CHECK_FALSE(r.pass);
  CHECK(r.slack_ratio == 0.5);

  r.lhs = 1.0 + 5e-10;
  r.rhs = 1.0;
  settle(r);
  CHECK(r.pass);
  CHECK(r.tie);

  r.lhs = r.rhs = 0.0;
  settle(r);
  CHECK(r.pass);
  CHECK(r.slack_ratio == 1.0);

  r.lhs = 0.0;
  r.rhs = 2.0;
  settle(r);
  CHECK(std::isinf(r.slack_ratio));
}

TEST_CASE("statement identifiers") {
  CHECK(all_statements().size() == 11);
  for (Statement s : all_statements()) CHECK(statement_from_id(statement_id(s)) == s);
  CHECK(statement_id(Statement::Indeterminacy) == "thm_1_1");
  CHECK(statement_id(Statement::LuiseSavareHk) == "prop_2_5_hk");
  CHECK_FALSE(statement_from_id("thm_9_9").has_value());
}

TEST_CASE("indeterminacy on the circle") {
  const MetricMeasureSpace c = circle(256);
  const Vector f = sample(c, [](double x) { return std::sin(x); });
  const BoundReport r = verify_indeterminacy(c, f);
  CHECK(r.pass);
  CHECK(r.statement == "thm_1_1");
  CHECK(r.lhs == doctest::Approx(8.0).epsilon(1e-3));
  CHECK(r.rhs == doctest::Approx(0.7428).epsilon(1e-3));
  CHECK(r.slack_ratio >= 10.0);
  CHECK(r.parameter("Per") == 2.0);
  CHECK(r.parameter("step1_max_g") <= r.parameter("W1"));

  const BoundReport neg = verify_indeterminacy(c, -f);
  CHECK(neg.lhs == doctest::Approx(r.lhs).epsilon(1e-12));
  CHECK(neg.rhs == doctest::Approx(r.rhs).epsilon(1e-12));

  const BoundReport big = verify_indeterminacy(c, 3.5 * f);
  CHECK(big.lhs == doctest::Approx(3.5 * r.lhs).epsilon(1e-12));
  CHECK(big.rhs == doctest::Approx(3.5 * r.rhs).epsilon(1e-12));
  CHECK(big.slack_ratio == doctest::Approx(r.slack_ratio).epsilon(1e-12));

  const BoundReport heavy = verify_indeterminacy(scaled(c, 2.5), f);
  CHECK(heavy.slack_ratio == doctest::Approx(r.slack_ratio).epsilon(1e-10));

  CHECK_THROWS_AS(verify_indeterminacy(c, Vector::Zero(256)), Error);
}

TEST_CASE("mean policy") {
  const MetricMeasureSpace c = circle(64);
  const Vector f = sample(c, [](double x) { return std::sin(x) + 0.3; });
  const BoundReport r = verify_indeterminacy(c, f);
  CHECK(r.parameter("mean_subtracted") == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_FALSE(r.notes.empty());
  VerifyOptions strict;
  strict.mean_policy = MeanPolicy::Reject;
  CHECK_THROWS_AS(Verifier(c, strict).indeterminacy(f), Error);
}

TEST_CASE("indeterminacy for p > 1") {
  const MetricMeasureSpace c = circle(128);
  const Vector f = sample(c, [](double x) { return std::sin(x); });
  const BoundReport one = verify_indeterminacy_p(c, f, 1.0);
  const BoundReport base = verify_indeterminacy(c, f);
  CHECK(one.statement == base.statement);
  CHECK(one.lhs == base.lhs);
  CHECK(one.rhs == base.rhs);
  const BoundReport two = verify_indeterminacy_p(c, f, 2.0);
  CHECK(two.pass);
  CHECK(two.statement == "cor_3_3");
  // W_2 (||f||_1 / 2)^{1/2} >= W_1.
  const double l1 = two.parameter("l1");
  CHECK(two.parameter("Wp") * std::sqrt(l1 / 2.0) >= two.parameter("W1"));
  CHECK(two.parameter("holder_lhs") >= two.parameter("holder_rhs"));
}

TEST_CASE("eigenfunction bound on the circle") {
  const Index n = 1024;
  const MetricMeasureSpace c = circle(n);
  const Verifier v(c);
  std::vector<double> slacks;
  for (int k = 1; k <= 8; ++k) {
    const Vector f = sample(c, [k](double x) { return std::sin(k * x); });
    const BoundReport r = v.eig_bound(circle_lambda(n, k), f);
    CAPTURE(k);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(4.0 / k).epsilon(1e-3));
    CHECK(r.parameter("identity_rel_error") <= 1e-8);
    CHECK(r.parameter("eigen_residual") <= 1e-9);
    slacks.push_back(r.slack_ratio);
    if (k == 1) CHECK(r.rhs == doctest::Approx(std::exp(-0.5) * 4.0).epsilon(1e-3));
  }
  for (double s : slacks) CHECK(std::abs(s - std::exp(0.5)) <= 0.02 * std::exp(0.5));
  CHECK_THROWS_AS(v.eig_bound(0.0, sample(c, [](double x) { return std::sin(x); })), Error);
  const BoundReport p2 = v.eig_bound_p(circle_lambda(n, 1), sample(c, [](double x) { return std::sin(x); }), 2.0);
  CHECK(p2.pass);
  CHECK(p2.statement == "cor_4_2");
}

TEST_CASE("eigenfunction bound with negative curvature uses C(K, M)") {
  std::mt19937_64 rng(3);
  const MetricMeasureSpace base = oracle::random_graph_space(12, rng);
  const MetricMeasureSpace s(base.name(), base.dist(), base.measure(), base.edges(), -0.5);
  const Verifier v(s);
  const SpectralDecomposition& sp = v.heat().spectrum();
  const BoundReport r = v.eig_bound(sp.eigenvalues[2], sp.eigenfunctions.col(2));
  CHECK(r.parameter("C") == doctest::Approx(constant_eig(-0.5, sp.eigenvalues[2])));
  CHECK(r.parameter("identity_rel_error") <= 1e-8);
  const BoundReport low = v.eig_bound(sp.eigenvalues[2], sp.eigenfunctions.col(2), sp.eigenvalues[1]);
  CHECK(low.parameter("M") == sp.eigenvalues[1]);
  CHECK_THROWS_AS(v.eig_bound(sp.eigenvalues[1], sp.eigenfunctions.col(1), 2.0 * sp.eigenvalues[1]), Error);
}

TEST_CASE("HK indeterminacy") {
  const MetricMeasureSpace c = circle(64);
  const Vector f = sample(c, [](double x) { return std::sin(x); });
  const Verifier v(c);
  const std::vector<BoundReport> rs = v.hk_indeterminacy(f, {1e-3, 1e-2, 10.0});
  REQUIRE(rs.size() == 3);
  const BoundReport& small = rs[0];
  CHECK(small.pass);
  CHECK_FALSE(small.vacuous);
  const double l1 = small.parameter("l1");
  const double j0 = 2.0 * std::sqrt(1e-3 / kPi);
  CHECK(small.parameter("J_K") == doctest::Approx(j0).epsilon(1e-14));
  CHECK(small.rhs == doctest::Approx(std::sqrt(l1 - 2.0 * std::sqrt(j0 * 2.0 * l1 * small.parameter("linf"))))
                         .epsilon(1e-12));
  CHECK(small.tolerance == doctest::Approx(1e-8 + 10.0 * small.parameter("epsilon")));
  const BoundReport& large = rs[2];
  CHECK(large.vacuous);
  CHECK(large.rhs == 0.0);
  CHECK(large.pass);

  // Constant density: f- = 0 and Per = 0, so the bound is attained.
  const std::vector<BoundReport> flat = v.hk_indeterminacy(Vector::Constant(64, 0.7), {1e-3});
  const double expected = std::sqrt(0.7 * c.total_mass());
  CHECK(std::abs(flat[0].lhs - expected) <= flat[0].tolerance);
  CHECK(flat[0].rhs == doctest::Approx(expected).epsilon(1e-12));
  CHECK(flat[0].pass);
}

TEST_CASE("heat-flow contraction of Wasserstein and HK against Hellinger") {
  const MetricMeasureSpace c = circle(256);
  const Vector f = sample(c, [](double x) { return std::sin(x); });
  const SignedDensity sd(f, c.measure());
  const Verifier v(c);
  const std::vector<double> grid = log_grid(1e-3, 1e2, 200);
  double worst = kInfinity;
  for (const BoundReport& r : v.luise_savare_wasserstein(sd.positive(), sd.negative(), 1.0, grid)) {
    CHECK(r.pass);
    worst = std::min(worst, r.slack_ratio);
  }
  CHECK(worst >= std::exp(0.5) * (1.0 - 1e-3));
  CHECK(worst <= std::exp(0.5) * 1.01);

  for (const BoundReport& r : v.luise_savare_wasserstein(sd.positive(), sd.positive(), 2.0, {0.1, 1.0})) {
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.pass);
  }

  std::mt19937_64 rng(4);
  const MetricMeasureSpace s = oracle::random_graph_space(32, rng);
  const Verifier vs(s);
  const std::vector<double> grid20 = vs.default_grid(20);
  CHECK(grid20.size() == 20);
  for (int trial = 0; trial < 3; ++trial) {
    const auto [a, b] = oracle::random_balanced_pair(s.measure(), rng);
    for (double p : {1.0, 2.0}) {
      for (const BoundReport& r : vs.luise_savare_wasserstein(a, b, p, grid20)) CHECK(r.pass);
    }
    for (const BoundReport& r : vs.luise_savare_hk(a, b, log_grid(1e-2, 1e1, 5))) CHECK(r.pass);
  }
  const std::vector<BoundReport> both = verify_luise_savare(s, s.measure().cwiseInverse(), Vector::Ones(32), 2.0,
                                                            {0.5});
  CHECK(both.size() == 2);
}

TEST_CASE("heat perimeter inequality") {
  const MetricMeasureSpace tp = two_point(1.0);
  const Verifier v(tp);
  for (double t : {1e-3, 0.1, 1.0, 5.0}) {
    const BoundReport r = v.heat_perimeter(point_set(2, {0}), {t})[0];
    CHECK(r.lhs == doctest::Approx(0.5 * (1.0 - std::exp(-2.0 * t))).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(0.5 * j_profile(0.0, t)).epsilon(1e-14));
    CHECK(r.pass);
  }
  const BoundReport whole = v.heat_perimeter(PointSet(2, true), {1.0})[0];
  CHECK(whole.lhs == doctest::Approx(0.0));
  CHECK(whole.rhs == 0.0);
  CHECK(whole.pass);

  const MetricMeasureSpace c = circle(512);
  std::vector<Index> arc;
  for (Index i = 0; i < 128; ++i) arc.push_back(i);
  const Verifier vc(c);
  const std::vector<BoundReport> rs = vc.heat_perimeter(point_set(512, arc), {1e-4, 1e-2, 1.0});
  for (const BoundReport& r : rs) CHECK(r.pass);
}

TEST_CASE("square-root heat inequality") {
  const MetricMeasureSpace tp = two_point(1.0);
  Vector f(2);
  f << 1.0, -1.0;
  for (double t : {1e-3, 0.1, 1.0}) {
    const BoundReport r = verify_sqrt_heat(tp, f, t);
    CHECK(r.lhs == doctest::Approx(std::sqrt(1.0 - std::exp(-4.0 * t))).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(std::sqrt(2.0 * j_profile(0.0, t))).epsilon(1e-14));
    CHECK(r.pass);
  }
  const MetricMeasureSpace c = circle(256);
  const Verifier v(c);
  const Vector s = sample(c, [](double x) { return std::sin(x); });
  for (double t : {1e-3, 1e-2, 1e-1}) CHECK(v.sqrt_heat(s, t).pass);
  const BoundReport pos = v.sqrt_heat(s.cwiseAbs(), 0.1);
  CHECK(pos.lhs == 0.0);
  CHECK(pos.pass);
}

TEST_CASE("normalised Cheeger inequality") {
  Vector f(2);
  f << 1.0, -1.0;
  const BoundReport tp = verify_norm_cheeger(two_point(1.0), f);
  CHECK(tp.lhs == 0.5);
  CHECK(tp.rhs == 0.5);
  CHECK(tp.pass);
  CHECK_FALSE(tp.heuristic);

  const MetricMeasureSpace c = circle(16);
  Vector g(16);
  for (Index i = 0; i < 16; ++i) g[i] = i < 8 ? 1.0 : -1.0;
  const BoundReport r = verify_norm_cheeger(c, g);
  CHECK(r.lhs == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(r.rhs == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(r.pass);
  CHECK(verify_norm_cheeger(c, 4.0 * g).lhs == doctest::Approx(r.lhs).epsilon(1e-14));
  CHECK(verify_norm_cheeger(circle(64), Vector::LinSpaced(64, -1.0, 1.0)).heuristic);
}

TEST_CASE("g(t) sweep") {
  const MetricMeasureSpace c = circle(256);
  const Vector f = sample(c, [](double x) { return std::sin(x); });
  const Verifier v(c);
  const Step1Curve curve = v.step1_curve(f, v.default_grid());
  CHECK(curve.t.size() == 1000);
  CHECK(curve.t_bar >= curve.t.front());
  CHECK(curve.t_bar <= curve.t.back());
  CHECK(curve.max_g >= curve.g_at_t_bar - 1e-6);
  CHECK(curve.g.back() < 0.0);
  const BoundReport r = v.step1_sweep(f, v.default_grid());
  CHECK(r.pass);
  CHECK(r.rhs == curve.max_g);
  CHECK(step1_sweep(c, f, {0.01, 0.1}).t.size() == 2);
}
