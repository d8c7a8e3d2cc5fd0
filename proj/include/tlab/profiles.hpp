#pragma once

#include <cmath>
#include <numbers>

namespace tlab {

/// Below this |K| t the curvature profiles use their K = 0 forms.
inline constexpr double kFlatThreshold = 1e-8;

/// R_K(t) = (e^{2Kt} - 1) / K, with R_0(t) = 2t.
template <typename Scalar>
Scalar r_profile(Scalar curvature, Scalar t) {
  using std::abs;
  using std::expm1;
  const Scalar kt = curvature * t;
  if (abs(kt) < Scalar(kFlatThreshold)) return Scalar(2) * t * (Scalar(1) + kt);
  return expm1(Scalar(2) * kt) / curvature;
}

/// J_K(t) = int_0^t sqrt(2 / (pi R_K(s))) ds in closed form.
template <typename Scalar>
Scalar j_profile(Scalar curvature, Scalar t) {
  using std::abs;
  using std::atan;
  using std::expm1;
  using std::log1p;
  using std::sqrt;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar kt = curvature * t;
  if (abs(kt) < Scalar(kFlatThreshold)) return Scalar(2) / sqrt(pi) * sqrt(t) * (Scalar(1) - kt / Scalar(6));
  if (curvature > 0) {
    return sqrt(Scalar(2) / (pi * curvature)) * atan(sqrt(expm1(Scalar(2) * kt)));
  }
  // arctanh(s) with s = sqrt(1 - e^{2Kt}) written as log(1 + s) - Kt, which
  // stays finite once s rounds to 1.
  const Scalar s = sqrt(-expm1(Scalar(2) * kt));
  return sqrt(Scalar(-2) / (pi * curvature)) * (log1p(s) - kt);
}

/// Evaluates R_K and J_K for a fixed curvature.
struct CurvatureProfile {
  double curvature = 0.0;

  double r(double t) const { return r_profile(curvature, t); }
  double j(double t) const { return j_profile(curvature, t); }
};

}  // namespace tlab
