#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlab/geometry.hpp"
#include "tlab/heat.hpp"
#include "tlab/mms.hpp"
#include "tlab/profiles.hpp"
#include "tlab/transport.hpp"

namespace tlab {

// --- constants -------------------------------------------------------------------

/// C(K, h): sqrt(pi) / (27 sqrt 2) for K >= 0, and
/// (1 - (2 pi)^{-1/4}) h / (8 h + 2 |K|^{1/2}) for K < 0.
template <typename Scalar>
Scalar constant_ind(Scalar curvature, Scalar cheeger) {
  using std::pow;
  using std::sqrt;
  if (!(cheeger > Scalar(0))) throw Error(ErrorCode::InvalidArgument, "Cheeger constant must be positive");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (curvature >= Scalar(0)) return sqrt(pi) / (Scalar(27) * sqrt(Scalar(2)));
  return (Scalar(1) - pow(Scalar(2) * pi, Scalar(-0.25))) * cheeger /
         (Scalar(8) * cheeger + Scalar(2) * sqrt(-curvature));
}

/// C(K, M): e^{-1/2} for K >= 0 and (1 - K/M)^{M/(2K) - 1/2} for K < 0.
template <typename Scalar>
Scalar constant_eig(Scalar curvature, Scalar bound) {
  using std::exp;
  using std::log1p;
  using std::pow;
  if (!(bound > Scalar(0))) throw Error(ErrorCode::InvalidArgument, "eigenvalue bound M must be positive");
  if (curvature >= Scalar(0)) return exp(Scalar(-0.5));
  const Scalar q = -curvature / bound;  // > 0
  if (q <= Scalar(kFlatThreshold)) {
    // (1 + q)^{-1/(2q) - 1/2} = exp(-(1/(2q) + 1/2) log1p(q)), smooth as q -> 0.
    return exp(-(Scalar(0.5) / q + Scalar(0.5)) * log1p(q));
  }
  return pow(Scalar(1) + q, bound / (Scalar(2) * curvature) - Scalar(0.5));
}

// --- optimal times -------------------------------------------------------------

enum class TimeRule {
  IndicatorFlat,      // indeterminacy, K >= 0
  IndicatorNegative,  // indeterminacy, K < 0, through s-bar
  Eigen,              // eigenfunction bound
};

/// Statistics the time selectors read. Unused fields are ignored.
struct TimeInputs {
  double l1 = 0.0;
  double linf = 0.0;
  double per = 0.0;
  double curvature = 0.0;
  double lambda = 0.0;
};

/// D_K(f) = ||f||_inf Per({f > 0}) / (||f||_1 |K|^{1/2}).
double d_ratio(double l1, double linf, double per, double curvature);

/// s-bar = 1 / (8 D + 1).
double optimal_s(double d);

/// t-bar for the given rule; the K < 0 indeterminacy rule maps s-bar back
/// through t = log(1 - s^2) / (2K).
double optimal_time(TimeRule rule, const TimeInputs& in);

// --- proof arithmetic ------------------------------------------------------------

/// g(t) = R_K(t)^{1/2} l1 - 2 (R_K(t) J_K(t) Per l1 linf)^{1/2}.
double step1_g(double curvature, double t, double l1, double linf, double per);

/// g1(s) = D s [1 - 2^{5/4} pi^{-1/4} (D artanh s)^{1/2}].
double g1(double s, double d);

/// g2(s) = D s [1 - 2^{5/4} pi^{-1/4} (D s / (1 - s))^{1/2}].
double g2(double s, double d);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

// --- reports ---------------------------------------------------------------------

enum class Statement {
  Indeterminacy,
  IndeterminacyP,
  EigenBound,
  EigenBoundP,
  HkIndeterminacy,
  LuiseSavareWasserstein,
  LuiseSavareHk,
  HeatPerimeter,
  SqrtHeat,
  NormCheeger,
  Step1Sweep,
};

/// Wire identifiers used in configs and report files.
std::string statement_id(Statement s);
std::optional<Statement> statement_from_id(const std::string& id);
const std::vector<Statement>& all_statements();

/// Whether the statement reads lhs >= rhs or lhs <= rhs.
enum class Direction { AtLeast, AtMost };

/// One numerical check of an inequality.
///
/// `slack_ratio` is larger side over smaller side in the direction the
/// statement asserts, so it exceeds 1 exactly when the inequality holds with
/// room: lhs/rhs for ">=" and rhs/lhs for "<=". It is 1 when both sides
/// vanish and +inf when only the side that should be smaller vanishes.
struct BoundReport {
  std::string statement;
  std::string space;
  Index n = 0;
  double curvature = 0.0;
  double p = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  Direction direction = Direction::AtLeast;
  double slack_ratio = 1.0;
  double tolerance = 0.0;
  std::string tolerance_source;
  bool pass = false;
  /// Violated by at most 1e-9 in absolute terms.
  bool tie = false;
  /// Right-hand side is trivial (e.g. a negative radicand).
  bool vacuous = false;
  /// Relies on an estimate rather than an exact input (sweep Cheeger).
  bool heuristic = false;
  std::string constant_formula;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<std::string> notes;

  double parameter(const std::string& name) const;
};

inline constexpr double kBoundTolerance = 1e-8;
inline constexpr double kTieTolerance = 1e-9;

/// Fills slack_ratio, pass and tie from lhs, rhs, direction and tolerance.
void settle(BoundReport& report);

// --- verification ------------------------------------------------------------------

/// What to do with a nonzero mean where the statement assumes zero mean.
enum class MeanPolicy { Subtract, Reject };

struct VerifyOptions {
  MeanPolicy mean_policy = MeanPolicy::Subtract;
  EntropyTransportSettings hk;
  /// Points in the diagnostic g(t) grid.
  int step1_points = 1000;
};

/// The lower-bound curve g(t) over a grid.
struct Step1Curve {
  std::vector<double> t;
  std::vector<double> g;
  double max_g = 0.0;
  double argmax_t = 0.0;
  /// Closed-form optimal time for the space's sign of K.
  double t_bar = 0.0;
  double g_at_t_bar = 0.0;
};

/// Runs the statement checks on one space, caching its heat semigroup and
/// Cheeger estimates between calls.
class Verifier {
 public:
  explicit Verifier(const MetricMeasureSpace& space, VerifyOptions options = {});

  const MetricMeasureSpace& space() const { return space_; }
  const HeatSemigroup& heat() const;
  /// Exact when n <= 20, sweep cut otherwise.
  const CheegerEstimate& cheeger_estimate() const;
  /// Default grid: 1000 log-spaced times over [1e-6, 1e2] / lambda_1.
  std::vector<double> default_grid(int points = 1000) const;

  BoundReport indeterminacy(const Vector& f) const;
  BoundReport indeterminacy_p(const Vector& f, double p) const;
  /// `bound` is M in C(K, M); defaults to lambda.
  BoundReport eig_bound(double lambda, const Vector& f, std::optional<double> bound = std::nullopt) const;
  BoundReport eig_bound_p(double lambda, const Vector& f, double p,
                          std::optional<double> bound = std::nullopt) const;
  std::vector<BoundReport> hk_indeterminacy(const Vector& f, const std::vector<double>& times) const;
  std::vector<BoundReport> luise_savare_wasserstein(const Vector& rho0, const Vector& rho1, double p,
                                                    const std::vector<double>& times) const;
  std::vector<BoundReport> luise_savare_hk(const Vector& rho0, const Vector& rho1,
                                           const std::vector<double>& times) const;
  std::vector<BoundReport> heat_perimeter(const PointSet& set, const std::vector<double>& times) const;
  BoundReport sqrt_heat(const Vector& f, double t) const;
  BoundReport norm_cheeger(const Vector& f) const;
  Step1Curve step1_curve(const Vector& f, const std::vector<double>& times) const;
  /// W_1(f+ m, f- m) >= max over the grid of g(t).
  BoundReport step1_sweep(const Vector& f, const std::vector<double>& times) const;

 private:
  BoundReport make_report(Statement s, Direction d) const;
  /// Applies the mean policy; notes go to `report`.
  Vector centered(const Vector& f, BoundReport& report) const;

  const MetricMeasureSpace& space_;
  VerifyOptions options_;
  mutable std::unique_ptr<HeatSemigroup> heat_;
  mutable std::optional<CheegerEstimate> cheeger_;
};

// Free-function forms; each builds a fresh Verifier.
BoundReport verify_indeterminacy(const MetricMeasureSpace& space, const Vector& f);
BoundReport verify_indeterminacy_p(const MetricMeasureSpace& space, const Vector& f, double p);
BoundReport verify_eig_bound(const MetricMeasureSpace& space, double lambda, const Vector& f,
                             std::optional<double> bound = std::nullopt);
BoundReport verify_eig_bound_p(const MetricMeasureSpace& space, double lambda, const Vector& f, double p,
                               std::optional<double> bound = std::nullopt);
std::vector<BoundReport> verify_hk_indeterminacy(const MetricMeasureSpace& space, const Vector& f,
                                                 const std::vector<double>& times);
std::vector<BoundReport> verify_luise_savare(const MetricMeasureSpace& space, const Vector& rho0,
                                             const Vector& rho1, double p, const std::vector<double>& times);
std::vector<BoundReport> verify_heat_perimeter(const MetricMeasureSpace& space, const PointSet& set,
                                               const std::vector<double>& times);
BoundReport verify_sqrt_heat(const MetricMeasureSpace& space, const Vector& f, double t);
BoundReport verify_norm_cheeger(const MetricMeasureSpace& space, const Vector& f);
Step1Curve step1_sweep(const MetricMeasureSpace& space, const Vector& f, const std::vector<double>& times);

}  // namespace tlab
