#pragma once

#include <string>

#include "tlab/mms.hpp"

namespace tlab {

/// Per(A) = sum of sigma over edges with exactly one endpoint in A.
double perimeter(const MetricMeasureSpace& space, const PointSet& set);

enum class CheegerMethod { BruteForce, SweepCut };

std::string to_string(CheegerMethod method);

/// Bracket [lower, upper] on h(X) = inf { Per(A)/m(A) : 0 < m(A) <= m(X)/2 }.
struct CheegerEstimate {
  double lower = 0.0;
  double upper = 0.0;
  CheegerMethod method = CheegerMethod::BruteForce;
  /// Admissible set with Per/m equal to `upper`.
  PointSet witness;
};

inline constexpr Index kMaxBruteForcePoints = 20;

/// Brute force walks all 2^{n-1} - 1 cuts in Gray-code order (n <= 20) and
/// returns lower == upper. Sweep cut scans prefix sets of the points sorted
/// by the first nonconstant eigenfunction for `upper`; `lower` is
/// (lambda_1 / 2) min_{w > 0} sigma / w, which follows from testing the
/// Rayleigh quotient with chi_A - m(A)/m(X).
CheegerEstimate cheeger(const MetricMeasureSpace& space, CheegerMethod method);

}  // namespace tlab
