#include "tlab/heat.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace tlab {

namespace {

constexpr double kResidualTolerance = 1e-10;

void update_residuals(const MetricMeasureSpace& space, SpectralDecomposition& d) {
  const Matrix applied = space.measure().cwiseInverse().asDiagonal() *
                         (space.conductance_laplacian() * d.eigenfunctions);
  const Matrix r = applied - d.eigenfunctions * d.eigenvalues.asDiagonal();
  d.residuals = (space.measure().asDiagonal() * r.cwiseAbs2()).colwise().sum().cwiseSqrt().transpose();
}

bool residuals_ok(const SpectralDecomposition& d, Index count) {
  for (Index i = 0; i < count; ++i)
    if (d.residuals[i] > kResidualTolerance * (1.0 + d.eigenvalues[i])) return false;
  return true;
}

/// One first-order correction sweep. With B = Phi^T L Phi, off-cluster
/// entries are removed by the antisymmetric rotation Phi (I + E),
/// E_ji = -B_ji / (lambda_j - lambda_i); within each cluster the block of B
/// is diagonalized. The dense solver's backward error is eps * ||L||, which
/// on fine grids exceeds the residual tolerance for the low modes.
void refine(const MetricMeasureSpace& space, SpectralDecomposition& d) {
  const Index n = d.size();
  const Matrix b = d.eigenfunctions.transpose() * (space.conductance_laplacian() * d.eigenfunctions);
  const std::vector<EigenCluster> clusters = eigenvalue_clusters(d.eigenvalues);
  std::vector<Index> cluster_of(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (Index i = clusters[c].begin; i < clusters[c].end; ++i) cluster_of[i] = static_cast<Index>(c);

  Matrix rotation = Matrix::Identity(n, n);
  for (Index i = 1; i < n; ++i) {
    for (Index j = 1; j < n; ++j) {
      if (cluster_of[i] == cluster_of[j]) continue;
      rotation(j, i) = -0.5 * (b(j, i) + b(i, j)) / (d.eigenvalues[j] - d.eigenvalues[i]);
    }
  }
  Vector eigenvalues = d.eigenvalues;
  for (const EigenCluster& c : clusters) {
    if (c.begin == 0) continue;
    const Index size = c.end - c.begin;
    Matrix block = 0.5 * (b.block(c.begin, c.begin, size, size) + b.block(c.begin, c.begin, size, size).transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> ritz(block);
    rotation.block(0, c.begin, n, size) = rotation.block(0, c.begin, n, size) * ritz.eigenvectors();
    eigenvalues.segment(c.begin, size) = ritz.eigenvalues();
  }
  d.eigenfunctions = (d.eigenfunctions * rotation).eval();
  d.eigenvalues = eigenvalues;
  d.eigenfunctions.col(0).setConstant(1.0 / std::sqrt(space.total_mass()));
  d.eigenvalues[0] = 0.0;
}

void fix_signs(SpectralDecomposition& d) {
  const Index n = d.eigenfunctions.rows();
  for (Index i = 1; i < d.size(); ++i) {
    auto phi = d.eigenfunctions.col(i);
    const double scale = phi.cwiseAbs().maxCoeff();
    for (Index x = 0; x < n; ++x) {
      if (std::abs(phi[x]) > 1e-10 * scale) {
        if (phi[x] < 0.0) phi = -phi;
        break;
      }
    }
  }
}

SpectralDecomposition full_decomposition(const MetricMeasureSpace& space) {
  const Index n = space.size();
  const Vector inv_sqrt_m = space.measure().cwiseSqrt().cwiseInverse();

  // M^{-1/2} L M^{-1/2} is similar to -Delta = M^{-1} L and symmetric.
  Matrix sym = Matrix(space.conductance_laplacian());
  sym = inv_sqrt_m.asDiagonal() * sym * inv_sqrt_m.asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Convergence, "dense symmetric eigensolver failed on " + space.name());
  }

  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenfunctions = inv_sqrt_m.asDiagonal() * solver.eigenvectors();

  // The kernel of a connected graph is exactly the constants.
  out.eigenvalues[0] = 0.0;
  out.eigenfunctions.col(0).setConstant(1.0 / std::sqrt(space.total_mass()));
  for (Index i = 1; i < n; ++i) out.eigenvalues[i] = std::max(out.eigenvalues[i], 0.0);

  fix_signs(out);

  update_residuals(space, out);
  return out;
}

}  // namespace

Vector laplacian_apply(const MetricMeasureSpace& space, const Vector& f) {
  if (f.size() != space.size()) throw Error(ErrorCode::InvalidArgument, "function size mismatch");
  return -(space.conductance_laplacian() * f).cwiseQuotient(space.measure());
}

SpectralDecomposition spectrum(const MetricMeasureSpace& space, Index count) {
  if (count < 1 || count > space.size()) {
    throw Error(ErrorCode::InvalidArgument, "eigenpair count must lie in [1, n]");
  }
  SpectralDecomposition full = full_decomposition(space);
  if (!residuals_ok(full, count)) {
    refine(space, full);
    for (Index i = 1; i < full.size(); ++i) full.eigenvalues[i] = std::max(full.eigenvalues[i], 0.0);
    fix_signs(full);
    update_residuals(space, full);
  }
  for (Index i = 0; i < count; ++i) {
    if (full.residuals[i] > kResidualTolerance * (1.0 + full.eigenvalues[i])) {
      throw Error(ErrorCode::Convergence, "eigenpair " + std::to_string(i) + " residual " +
                                              std::to_string(full.residuals[i]) + " exceeds tolerance");
    }
  }
  if (count == space.size()) return full;
  SpectralDecomposition out;
  out.eigenvalues = full.eigenvalues.head(count);
  out.eigenfunctions = full.eigenfunctions.leftCols(count);
  out.residuals = full.residuals.head(count);
  return out;
}

std::vector<EigenCluster> eigenvalue_clusters(const Vector& eigenvalues, double relative_gap) {
  std::vector<EigenCluster> clusters;
  if (eigenvalues.size() == 0) return clusters;
  const double spread = std::max(eigenvalues.maxCoeff() - eigenvalues.minCoeff(), 1e-300);
  Index begin = 0;
  for (Index i = 1; i <= eigenvalues.size(); ++i) {
    if (i == eigenvalues.size() || eigenvalues[i] - eigenvalues[i - 1] > relative_gap * spread) {
      clusters.push_back({begin, i});
      begin = i;
    }
  }
  return clusters;
}

Matrix cluster_projector(const SpectralDecomposition& spectrum, const EigenCluster& cluster,
                         const Vector& measure) {
  const Matrix basis = spectrum.eigenfunctions.middleCols(cluster.begin, cluster.end - cluster.begin);
  return basis * (basis.transpose() * measure.asDiagonal());
}

HeatSemigroup::HeatSemigroup(const MetricMeasureSpace& space)
    : measure_(space.measure()), curvature_(space.curvature()), spectrum_(tlab::spectrum(space, space.size())) {}

Vector HeatSemigroup::apply(const Vector& f, double t) const {
  if (f.size() != measure_.size()) throw Error(ErrorCode::InvalidArgument, "function size mismatch");
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "heat time must be nonnegative");
  if (t == 0.0) return f;
  const Matrix& phi = spectrum_.eigenfunctions;
  Vector coefficients = phi.transpose() * f.cwiseProduct(measure_);
  coefficients.array() *= (-t * spectrum_.eigenvalues.array()).exp();
  return phi * coefficients;
}

Vector HeatSemigroup::apply_zero_mean(const Vector& f, double t) const {
  if (f.size() != measure_.size()) throw Error(ErrorCode::InvalidArgument, "function size mismatch");
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "heat time must be nonnegative");
  const Matrix& phi = spectrum_.eigenfunctions;
  Vector coefficients = phi.transpose() * f.cwiseProduct(measure_);
  coefficients[0] = 0.0;
  coefficients.array() *= (-t * spectrum_.eigenvalues.array()).exp();
  return phi * coefficients;
}

Vector heat_apply(const MetricMeasureSpace& space, const Vector& f, double t) {
  return HeatSemigroup(space).apply(f, t);
}

}  // namespace tlab
