#include "tlab/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>

#include "tlab/heat.hpp"

namespace tlab {

namespace {

constexpr double kHalfMassSlack = 1e-12;

struct Incidence {
  Index other;
  double sigma;
};

std::vector<std::vector<Incidence>> incidence(const MetricMeasureSpace& space) {
  std::vector<std::vector<Incidence>> out(static_cast<std::size_t>(space.size()));
  for (const Edge& e : space.edges()) {
    if (e.sigma == 0.0) continue;
    out[e.i].push_back({e.j, e.sigma});
    out[e.j].push_back({e.i, e.sigma});
  }
  return out;
}

PointSet complement(const PointSet& set) {
  PointSet out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = !set[i];
  return out;
}

/// Keeps the best admissible side of each cut seen so far.
class CutTracker {
 public:
  explicit CutTracker(double total) : half_(0.5 * total + kHalfMassSlack * total) {}

  /// Returns which side to record: +1 the set, -1 its complement, 0 neither.
  int offer(double per, double mass, double total) {
    int chosen = 0;
    const double rest = total - mass;
    if (mass > 0.0 && mass <= half_) consider(per / mass, 1, chosen);
    if (rest > 0.0 && rest <= half_) consider(per / rest, -1, chosen);
    return chosen;
  }

  double best() const { return best_; }

 private:
  void consider(double ratio, int side, int& chosen) {
    if (ratio < best_) {
      best_ = ratio;
      chosen = side;
    }
  }

  double half_;
  double best_ = std::numeric_limits<double>::infinity();
};

CheegerEstimate finalize(const MetricMeasureSpace& space, PointSet witness, CheegerMethod method) {
  CheegerEstimate out;
  out.method = method;
  out.upper = perimeter(space, witness) / set_mass(space, witness);
  out.witness = std::move(witness);
  return out;
}

CheegerEstimate brute_force(const MetricMeasureSpace& space) {
  const Index n = space.size();
  if (n > kMaxBruteForcePoints) {
    throw Error(ErrorCode::Unsupported, "brute-force Cheeger needs n <= " + std::to_string(kMaxBruteForcePoints));
  }
  const auto adj = incidence(space);
  const double total = space.total_mass();
  CutTracker tracker(total);

  // Subsets of the first n-1 points; the last point marks the complement.
  PointSet set(static_cast<std::size_t>(n), false);
  PointSet best_set;
  double per = 0.0;
  double mass = 0.0;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < count; ++k) {
    const auto flip = static_cast<Index>(std::countr_zero(k));
    const bool entering = !set[flip];
    for (const Incidence& inc : adj[flip]) per += (set[inc.other] == entering) ? -inc.sigma : inc.sigma;
    mass += entering ? space.measure()[flip] : -space.measure()[flip];
    set[flip] = entering;
    const int side = tracker.offer(per, mass, total);
    if (side == 1) best_set = set;
    if (side == -1) best_set = complement(set);
  }
  CheegerEstimate out = finalize(space, std::move(best_set), CheegerMethod::BruteForce);
  out.lower = out.upper;
  return out;
}

CheegerEstimate sweep_cut(const MetricMeasureSpace& space) {
  const Index n = space.size();
  const SpectralDecomposition spec = spectrum(space, 2);
  const Vector phi = spec.eigenfunctions.col(1);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return phi[x] < phi[y]; });

  const auto adj = incidence(space);
  const double total = space.total_mass();
  CutTracker tracker(total);
  PointSet set(static_cast<std::size_t>(n), false);
  PointSet best_set;
  double per = 0.0;
  double mass = 0.0;
  for (Index k = 0; k + 1 < n; ++k) {
    const Index x = order[k];
    for (const Incidence& inc : adj[x]) per += set[inc.other] ? -inc.sigma : inc.sigma;
    mass += space.measure()[x];
    set[x] = true;
    const int side = tracker.offer(per, mass, total);
    if (side == 1) best_set = set;
    if (side == -1) best_set = complement(set);
  }
  CheegerEstimate out = finalize(space, std::move(best_set), CheegerMethod::SweepCut);

  double ratio = std::numeric_limits<double>::infinity();
  for (const Edge& e : space.edges())
    if (e.w > 0.0) ratio = std::min(ratio, e.sigma / e.w);
  out.lower = std::max(0.5 * spec.eigenvalues[1] * ratio, 0.0);
  out.lower = std::min(out.lower, out.upper);
  return out;
}

}  // namespace

double perimeter(const MetricMeasureSpace& space, const PointSet& set) {
  if (static_cast<Index>(set.size()) != space.size()) {
    throw Error(ErrorCode::InvalidArgument, "point set size does not match the space");
  }
  double per = 0.0;
  for (const Edge& e : space.edges())
    if (set[e.i] != set[e.j]) per += e.sigma;
  return per;
}

std::string to_string(CheegerMethod method) {
  return method == CheegerMethod::BruteForce ? "brute_force" : "sweep_cut";
}

CheegerEstimate cheeger(const MetricMeasureSpace& space, CheegerMethod method) {
  return method == CheegerMethod::BruteForce ? brute_force(space) : sweep_cut(space);
}

}  // namespace tlab
