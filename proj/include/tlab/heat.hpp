#pragma once

#include <vector>

#include "tlab/mms.hpp"
#include "tlab/profiles.hpp"

namespace tlab {

/// (Delta f)(x) = (1/m_x) sum_y w_xy (f(y) - f(x)).
Vector laplacian_apply(const MetricMeasureSpace& space, const Vector& f);

/// Eigenpairs of -Delta, orthonormal in <f, g> = sum f g m.
///
/// Column i of `eigenfunctions` is phi_i. The first pair is exactly
/// (0, m(X)^{-1/2}); every other column has its first non-negligible
/// coordinate positive.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenfunctions;
  /// ||-Delta phi_i - lambda_i phi_i|| in the m-weighted norm.
  Vector residuals;

  Index size() const { return eigenvalues.size(); }
};

/// First `count` eigenpairs from a full dense decomposition.
SpectralDecomposition spectrum(const MetricMeasureSpace& space, Index count);

struct EigenCluster {
  Index begin = 0;
  Index end = 0;  // one past the last index
};

/// Groups numerically equal eigenvalues; the gap tolerance is relative to
/// the spread of the spectrum.
std::vector<EigenCluster> eigenvalue_clusters(const Vector& eigenvalues, double relative_gap = 1e-8);

/// Matrix of the m-orthogonal projector onto one eigenspace, P f = Phi_c Phi_c^T M f.
Matrix cluster_projector(const SpectralDecomposition& spectrum, const EigenCluster& cluster,
                         const Vector& measure);

/// Heat semigroup H_t = sum_i e^{-lambda_i t} <., phi_i> phi_i.
class HeatSemigroup {
 public:
  explicit HeatSemigroup(const MetricMeasureSpace& space);

  Vector apply(const Vector& f, double t) const;
  /// H_t f with the constant mode dropped exactly, i.e. H_t (f - mean f).
  /// Stays accurate when H_t f decays far below the mean of f.
  Vector apply_zero_mean(const Vector& f, double t) const;

  const SpectralDecomposition& spectrum() const { return spectrum_; }
  const Vector& measure() const { return measure_; }
  double curvature() const { return curvature_; }
  /// Smallest nonzero eigenvalue.
  double spectral_gap() const { return spectrum_.eigenvalues[1]; }

 private:
  Vector measure_;
  double curvature_ = 0.0;
  SpectralDecomposition spectrum_;
};

/// One-shot H_t f; builds the full decomposition each call.
Vector heat_apply(const MetricMeasureSpace& space, const Vector& f, double t);

}  // namespace tlab
