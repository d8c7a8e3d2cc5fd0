#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "tlab/mms.hpp"

namespace tlab::oracle {

/// Minimum of sum c_ij pi_ij over the transport polytope of (a, b), found
/// by visiting every basis of the marginal constraints. Fine for n <= 4.
inline double transport_by_vertices(const Matrix& cost, const Vector& a, const Vector& b) {
  const int n0 = static_cast<int>(a.size());
  const int n1 = static_cast<int>(b.size());
  const int vars = n0 * n1;
  const int rank = n0 + n1 - 1;
  // Row constraints for every source, column constraints for all but the last sink.
  Matrix constraints = Matrix::Zero(rank, vars);
  Vector rhs(rank);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) constraints(i, i * n1 + j) = 1.0;
    rhs[i] = a[i];
  }
  for (int j = 0; j + 1 < n1; ++j) {
    for (int i = 0; i < n0; ++i) constraints(n0 + j, i * n1 + j) = 1.0;
    rhs[n0 + j] = b[j];
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(rank));
  for (int k = 0; k < rank; ++k) pick[k] = k;
  while (true) {
    Matrix basis(rank, rank);
    for (int k = 0; k < rank; ++k) basis.col(k) = constraints.col(pick[k]);
    Eigen::FullPivLU<Matrix> lu(basis);
    if (lu.isInvertible()) {
      const Vector x = lu.solve(rhs);
      if (x.minCoeff() >= -1e-12) {
        double c = 0.0;
        for (int k = 0; k < rank; ++k) c += x[k] * cost(pick[k] / n1, pick[k] % n1);
        best = std::min(best, c);
      }
    }
    int k = rank - 1;
    while (k >= 0 && pick[k] == vars - rank + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int r = k + 1; r < rank; ++r) pick[r] = pick[r - 1] + 1;
  }
  return best;
}

/// Random metric space: points in the unit square with Euclidean distance,
/// random positive masses and a complete conductance graph.
inline MetricMeasureSpace random_planar_space(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = unit(rng), y[i] = unit(rng);
  Matrix dist(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist(i, j) = std::hypot(x[i] - x[j], y[i] - y[j]);
  Vector m(n);
  for (int i = 0; i < n; ++i) m[i] = 0.5 + unit(rng);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 0.5 + unit(rng), 0.5 + unit(rng)});
  return MetricMeasureSpace("random(n=" + std::to_string(n) + ")", dist, m, edges, 0.0);
}

/// Random connected graph on n points: a spanning path plus extra edges,
/// shortest-path metric over unit edge lengths.
inline MetricMeasureSpace random_graph_space(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  Matrix dist = Matrix::Constant(n, n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) dist(i, i) = 0.0;
  auto link = [&](int i, int j) {
    edges.push_back({i, j, 0.5 + unit(rng), 0.5 + unit(rng)});
    dist(i, j) = dist(j, i) = 1.0;
  };
  for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (unit(rng) < 0.2) link(i, j);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dist(i, j) = std::min(dist(i, j), dist(i, k) + dist(k, j));
  Vector m(n);
  for (int i = 0; i < n; ++i) m[i] = 0.5 + unit(rng);
  return MetricMeasureSpace("graph(n=" + std::to_string(n) + ")", dist, m, edges, 0.0);
}

/// Nonnegative density with a random fraction of zeros.
inline Vector random_density(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector rho(n);
  for (Index i = 0; i < n; ++i) rho[i] = unit(rng) < 0.3 ? 0.0 : unit(rng);
  if (rho.maxCoeff() == 0.0) rho[0] = 1.0;
  return rho;
}

/// Pair of densities with equal mass against m.
inline std::pair<Vector, Vector> random_balanced_pair(const Vector& m, std::mt19937_64& rng) {
  Vector a = random_density(m.size(), rng);
  Vector b = random_density(m.size(), rng);
  b *= a.dot(m) / b.dot(m);
  return {a, b};
}

}  // namespace tlab::oracle
