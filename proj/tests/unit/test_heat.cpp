#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tlab/heat.hpp"

using namespace tlab;

namespace {

constexpr double kPi = std::numbers::pi;

Vector sample(const MetricMeasureSpace& s, double (*fn)(double)) {
  Vector f(s.size());
  for (Index i = 0; i < f.size(); ++i) f[i] = fn(s.line()->position[i]);
  return f;
}

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector f(n);
  for (Index i = 0; i < n; ++i) f[i] = unit(rng);
  return f;
}

double weighted_norm(const Vector& f, const Vector& m) { return std::sqrt(f.cwiseAbs2().dot(m)); }

/// Composite Simpson on s = u^2, which removes the s^{-1/2} endpoint singularity.
double j_quadrature(double k, double t) {
  const int intervals = 4000;
  const double top = std::sqrt(t);
  const double h = top / intervals;
  auto integrand = [&](double u) {
    if (u == 0.0) return 2.0 / std::sqrt(kPi);
    return 2.0 * u * std::sqrt(2.0 / (kPi * r_profile(k, u * u)));
  };
  double sum = integrand(0.0) + integrand(top);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("laplacian examples") {
  const MetricMeasureSpace tp = two_point(1.0);
  Vector f(2);
  f << 1.0, -1.0;
  const Vector lf = laplacian_apply(tp, f);
  CHECK(lf[0] == doctest::Approx(-2.0));
  CHECK(lf[1] == doctest::Approx(2.0));

  const MetricMeasureSpace c = circle(256);
  CHECK(laplacian_apply(c, Vector::Constant(256, 3.0)).cwiseAbs().maxCoeff() == 0.0);
  const Vector s = sample(c, [](double x) { return std::sin(x); });
  const double h = 2.0 * kPi / 256.0;
  CHECK((laplacian_apply(c, s) + s).cwiseAbs().maxCoeff() <= h * h);
}

TEST_CASE("laplacian is in divergence form and symmetric") {
  std::mt19937_64 rng(5);
  for (const MetricMeasureSpace& s : {interval(30, 2.0), ou_chain(25), torus2d(5)}) {
    const Vector f = random_vector(s.size(), rng);
    const Vector g = random_vector(s.size(), rng);
    const Vector lf = laplacian_apply(s, f);
    const Vector lg = laplacian_apply(s, g);
    const double scale = lf.cwiseAbs().dot(s.measure()) + 1.0;
    CHECK(std::abs(lf.dot(s.measure())) <= 1e-12 * scale);
    CHECK(std::abs(lf.cwiseProduct(g).dot(s.measure()) - f.cwiseProduct(lg).dot(s.measure())) <= 1e-11 * scale);
  }
}

TEST_CASE("two_point spectrum") {
  const SpectralDecomposition sp = spectrum(two_point(1.0), 2);
  CHECK(sp.eigenvalues[0] == 0.0);
  CHECK(sp.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sp.eigenfunctions(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sp.eigenfunctions(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sp.eigenfunctions(1, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("circle spectrum matches the circulant formula") {
  const Index n = 256;
  const MetricMeasureSpace c = circle(n);
  const SpectralDecomposition sp = spectrum(c, n);
  const double h = 2.0 * kPi / n;
  CHECK(sp.eigenvalues[1] == doctest::Approx(2.0 * (1.0 - std::cos(h)) / (h * h)).epsilon(1e-12));
  CHECK(sp.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-4));
  for (Index k = 1; k < n / 2; ++k) {
    const double expected = 2.0 * (1.0 - std::cos(static_cast<double>(k) * h)) / (h * h);
    CAPTURE(k);
    CHECK(std::abs(sp.eigenvalues[2 * k - 1] - expected) <= 1e-10 * (1.0 + expected));
    CHECK(std::abs(sp.eigenvalues[2 * k] - expected) <= 1e-10 * (1.0 + expected));
  }
}

TEST_CASE("spectral decomposition invariants") {
  for (const MetricMeasureSpace& s : {circle(64), interval(50, 3.0), ou_chain(40), torus2d(6), circle(1024)}) {
    CAPTURE(s.name());
    const SpectralDecomposition sp = spectrum(s, s.size());
    const Vector& m = s.measure();
    CHECK(sp.eigenvalues[0] == 0.0);
    CHECK(sp.eigenvalues[1] > 0.0);
    const double c0 = 1.0 / std::sqrt(s.total_mass());
    CHECK((sp.eigenfunctions.col(0).array() - c0).abs().maxCoeff() == 0.0);
    for (Index i = 1; i < sp.size(); ++i) CHECK(sp.eigenvalues[i] >= sp.eigenvalues[i - 1]);
    for (Index i = 0; i < sp.size(); ++i) {
      CHECK(sp.residuals[i] <= 1e-10 * (1.0 + sp.eigenvalues[i]));
      const Vector phi = sp.eigenfunctions.col(i);
      const Vector r = -laplacian_apply(s, phi) - sp.eigenvalues[i] * phi;
      CHECK(weighted_norm(r, m) <= 1e-10 * (1.0 + sp.eigenvalues[i]));
      if (i > 0) CHECK(std::abs(phi.dot(m)) <= 1e-10);
      Index first = 0;
      const double scale = phi.cwiseAbs().maxCoeff();
      while (std::abs(phi[first]) <= 1e-10 * scale) ++first;
      CHECK(phi[first] > 0.0);
    }
    const Matrix gram = sp.eigenfunctions.transpose() * m.asDiagonal() * sp.eigenfunctions;
    CHECK((gram - Matrix::Identity(s.size(), s.size())).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("spectrum rejects bad counts") {
  CHECK_THROWS_AS(spectrum(circle(8), 0), Error);
  CHECK_THROWS_AS(spectrum(circle(8), 9), Error);
  const SpectralDecomposition sp = spectrum(circle(8), 3);
  CHECK(sp.size() == 3);
}

TEST_CASE("heat semigroup basics") {
  const MetricMeasureSpace c = circle(128);
  const HeatSemigroup heat(c);
  std::mt19937_64 rng(17);
  const Vector f = random_vector(c.size(), rng);
  CHECK(heat.apply(f, 0.0) == f);
  CHECK_THROWS_AS(heat.apply(f, -1.0), Error);
  const Vector a = heat.apply(heat.apply(f, 0.3), 0.4);
  const Vector b = heat.apply(f, 0.7);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-9 * b.cwiseAbs().maxCoeff());
  CHECK((heat_apply(c, f, 0.5) - heat.apply(f, 0.5)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("heat acts on eigenfunctions by e^{-lambda t}") {
  const MetricMeasureSpace c = circle(512);
  const HeatSemigroup heat(c);
  const SpectralDecomposition& sp = heat.spectrum();
  for (Index k = 1; k <= 8; ++k) {
    const Vector phi = sp.eigenfunctions.col(k);
    for (double lt : {1e-3, 0.1, 1.0, 3.0}) {
      const double t = lt / sp.eigenvalues[k];
      const Vector out = heat.apply(phi, t);
      const Vector expected = std::exp(-sp.eigenvalues[k] * t) * phi;
      CHECK(weighted_norm(out - expected, c.measure()) <= 1e-10 * weighted_norm(expected, c.measure()));
    }
  }
  // sin(k theta) itself, not just the computed basis.
  const Vector s3 = sample(c, [](double x) { return std::sin(3.0 * x); });
  const double h = 2.0 * kPi / 512.0;
  const double l3 = 2.0 * (1.0 - std::cos(3.0 * h)) / (h * h);
  const Vector out = heat.apply(s3, 0.25);
  CHECK(weighted_norm(out - std::exp(-l3 * 0.25) * s3, c.measure()) <= 1e-10 * weighted_norm(s3, c.measure()));
}

TEST_CASE("mass, positivity and contraction on random inputs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const MetricMeasureSpace& s : {circle(96), interval(80, 2.0), ou_chain(60), torus2d(7)}) {
    CAPTURE(s.name());
    const HeatSemigroup heat(s);
    const Vector& m = s.measure();
    for (int trial = 0; trial < 25; ++trial) {
      const Vector f = random_vector(s.size(), rng);
      Vector density = f.cwiseAbs();
      density /= density.dot(m);
      for (int k = 0; k < 10; ++k) {
        const double t = std::pow(10.0, -4.0 + 6.0 * unit(rng));
        const Vector hf = heat.apply(f, t);
        CHECK(std::abs(hf.dot(m) - f.dot(m)) <= 1e-10 * f.cwiseAbs().dot(m));
        CHECK(hf.cwiseAbs().dot(m) <= f.cwiseAbs().dot(m) * (1.0 + 1e-10));
        CHECK(hf.maxCoeff() <= f.maxCoeff() + 1e-10);
        CHECK(hf.minCoeff() >= f.minCoeff() - 1e-10);
        const Vector hd = heat.apply(density, t);
        CHECK(hd.minCoeff() >= -1e-10);
        CHECK(hd.dot(m) == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("zero-mean heat keeps relative accuracy at large times") {
  const MetricMeasureSpace c = circle(64);
  const HeatSemigroup heat(c);
  Vector f = Vector::Constant(64, 2.0);
  f += heat.spectrum().eigenfunctions.col(1);
  const double t = 60.0;
  const Vector out = heat.apply_zero_mean(f, t);
  const Vector expected = std::exp(-heat.spectral_gap() * t) * heat.spectrum().eigenfunctions.col(1);
  CHECK(weighted_norm(out - expected, c.measure()) <= 1e-8 * weighted_norm(expected, c.measure()));
}

TEST_CASE("eigenspace projectors do not depend on the basis") {
  const MetricMeasureSpace c = circle(48);
  const HeatSemigroup heat(c);
  const SpectralDecomposition& sp = heat.spectrum();
  const std::vector<EigenCluster> clusters = eigenvalue_clusters(sp.eigenvalues);
  CHECK(clusters.size() == 25);
  CHECK(clusters[0].end - clusters[0].begin == 1);
  CHECK(clusters[3].end - clusters[3].begin == 2);
  CHECK(clusters.back().end - clusters.back().begin == 1);

  // Rotate the basis of a degenerate cluster and rebuild its projector.
  const EigenCluster cl = clusters[5];
  SpectralDecomposition rotated = sp;
  const double angle = 0.7;
  const Vector u = sp.eigenfunctions.col(cl.begin);
  const Vector v = sp.eigenfunctions.col(cl.begin + 1);
  rotated.eigenfunctions.col(cl.begin) = std::cos(angle) * u + std::sin(angle) * v;
  rotated.eigenfunctions.col(cl.begin + 1) = -std::sin(angle) * u + std::cos(angle) * v;
  const Matrix p0 = cluster_projector(sp, cl, c.measure());
  const Matrix p1 = cluster_projector(rotated, cl, c.measure());
  CHECK((p0 - p1).cwiseAbs().maxCoeff() <= 1e-12);

  // H_t is the sum of e^{-lambda t} over cluster projectors.
  std::mt19937_64 rng(3);
  const Vector f = random_vector(c.size(), rng);
  Vector sum = Vector::Zero(c.size());
  for (const EigenCluster& k : clusters) {
    sum += std::exp(-sp.eigenvalues[k.begin] * 0.2) * (cluster_projector(sp, k, c.measure()) * f);
  }
  CHECK((sum - heat.apply(f, 0.2)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("curvature profiles: closed-form values") {
  CHECK(r_profile(0.0, 1.0) == 2.0);
  CHECK(j_profile(0.0, kPi) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r_profile(1.0, std::log(2.0) / 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j_profile(1.0, 40.0) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-15));
  CHECK(std::sqrt(kPi / 2.0) == doctest::Approx(1.2533).epsilon(1e-4));
}

TEST_CASE("curvature profiles: quadrature of J") {
  for (double k : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
    for (double t : {0.01, 0.1, 1.0}) {
      CAPTURE(k);
      CAPTURE(t);
      const double closed = j_profile(k, t);
      CHECK(std::abs(j_quadrature(k, t) - closed) <= 1e-8 * closed);
    }
  }
}

TEST_CASE("curvature profiles: positivity, monotonicity and continuity in K") {
  for (double k : {-3.0, -0.5, -1e-12, 0.0, 1e-12, 0.5, 3.0}) {
    double r_prev = 0.0;
    double j_prev = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double t = std::pow(10.0, -6.0 + 0.1 * i);
      const double r = r_profile(k, t);
      const double j = j_profile(k, t);
      CHECK(r > r_prev);
      CHECK(j > j_prev);
      r_prev = r;
      j_prev = j;
    }
  }
  for (double t : {1e-3, 0.1, 1.0}) {
    for (double k : {1e-7, -1e-7, 1e-10, -1e-10}) {
      CHECK(std::abs(r_profile(k, t) - 2.0 * t) <= 1e-6 * t);
      CHECK(std::abs(j_profile(k, t) - j_profile(0.0, t)) <= 1e-6 * j_profile(0.0, t));
    }
  }
  const CurvatureProfile prof{-1.0};
  CHECK(prof.r(0.5) == r_profile(-1.0, 0.5));
  CHECK(prof.j(0.5) == j_profile(-1.0, 0.5));
}
