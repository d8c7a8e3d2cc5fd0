#pragma once

#include <limits>
#include <vector>

#include "tlab/mms.hpp"

namespace tlab {

/// Distinguished +infinity for distances between measures of unequal mass.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Optimal coupling for W_p with a dual certificate.
struct TransportPlan {
  Eigen::SparseMatrix<double> coupling;  // n x n, entries pi(x, y) in mass units
  double p = 1.0;
  /// sum pi(x, y) d(x, y)^p; +inf when the masses differ.
  double total_cost = 0.0;
  /// Kantorovich potentials with u(x) + v(y) <= d(x, y)^p everywhere.
  Vector source_potential;
  Vector target_potential;
  double dual_value = 0.0;
  /// total_cost - dual_value, nonnegative up to rounding.
  double duality_gap = 0.0;
  long pivots = 0;
};

struct WassersteinResult {
  double distance = 0.0;
  TransportPlan plan;
};

/// Exact W_p between the measures rho0 m and rho1 m via network simplex.
///
/// Returns +inf (with an empty coupling) if the masses differ by more than
/// 1e-9 relative; otherwise the second measure is rescaled to the first
/// mass before solving.
WassersteinResult wasserstein(const MetricMeasureSpace& space, const Vector& rho0, const Vector& rho1,
                              double p);

/// Exact transport between mass vectors `a` and `b` for a general ground
/// cost matrix. Masses must be nonnegative and balanced to 1e-9 relative.
TransportPlan solve_transport(const Matrix& cost, const Vector& a, const Vector& b);

/// He_p between rho0 m and rho1 m with m as dominating measure, p in [1, 2].
double hellinger(const MetricMeasureSpace& space, const Vector& rho0, const Vector& rho1, double p);

// --- Hellinger-Kantorovich ---------------------------------------------------

struct EntropyTransportSettings {
  /// Target regularization; <= 0 selects 1e-3 times the cost scale.
  double epsilon = 0.0;
  double epsilon_decay = 0.5;
  int max_iterations = 10000;
  double tolerance = 1e-9;
};

struct EntropyTransportSolution {
  Matrix coupling;  // n x n
  double kl_source = 0.0;
  double kl_target = 0.0;
  double transport_cost = 0.0;
  double epsilon = 0.0;
  /// kl_source + kl_target + transport_cost.
  double objective = 0.0;
  /// Certified lower bound on HK^2 from a feasible dual pair.
  double dual_bound = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Negated regularized dual after each sweep of the last epsilon stage.
  std::vector<double> objective_trace;
};

struct HellingerKantorovichResult {
  /// sqrt(objective).
  double distance = 0.0;
  /// Declared bias bound 10 epsilon.
  double bias_bound = 0.0;
  EntropyTransportSolution solution;
};

/// c_alpha(d) = -2 log cos(min(d / sqrt(alpha), pi/2)); +inf once the
/// argument reaches pi/2.
double hk_cost(double distance, double alpha);

/// HK_alpha between rho0 m and rho1 m through the static entropy-transport
/// program, solved by log-domain unbalanced Sinkhorn with epsilon scaling.
HellingerKantorovichResult hellinger_kantorovich(const MetricMeasureSpace& space, const Vector& rho0,
                                                 const Vector& rho1, double alpha,
                                                 const EntropyTransportSettings& settings = {});

// --- 1D oracle -----------------------------------------------------------------

/// Closed-form W_p on catalog line spaces: circle with p = 1 (optimal
/// cumulative offset) and interval with p >= 1 (quantile coupling).
double wasserstein_oracle_1d(const MetricMeasureSpace& space, const Vector& rho0, const Vector& rho1,
                             double p);

}  // namespace tlab
