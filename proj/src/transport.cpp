#include "tlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "tlab/network_simplex.hpp"

namespace tlab {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kCostResolution = 1e12;

void check_density(const MetricMeasureSpace& space, const Vector& rho, const char* what) {
  if (rho.size() != space.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has wrong size");
  }
  for (Index i = 0; i < rho.size(); ++i) {
    if (!std::isfinite(rho[i]) || rho[i] < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(what) + " must be finite and nonnegative (index " + std::to_string(i) + ")");
    }
  }
}

bool masses_match(double a, double b) {
  return std::abs(a - b) <= kMassTolerance * std::max(std::abs(a), std::abs(b));
}

std::vector<Index> support(const Vector& mass) {
  std::vector<Index> out;
  for (Index i = 0; i < mass.size(); ++i)
    if (mass[i] > 0.0) out.push_back(i);
  return out;
}

double pow_cost(double d, double p) { return p == 1.0 ? d : std::pow(d, p); }

/// log sum_k exp(x_k), -inf for an empty or all -inf range. Terms below
/// e^{-700} relative to the largest are floored there, which keeps exp out
/// of the subnormal range.
template <typename Row>
double log_sum_exp(const Row& x) {
  const double top = x.maxCoeff();
  if (!std::isfinite(top)) return top;
  return top + std::log((x.array() - top).max(-700.0).exp().sum());
}

double kl_divergence(const Vector& p, const Vector& q) {
  double out = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) out += p[i] * std::log(p[i] / q[i]);
    out += q[i] - p[i];
  }
  return out;
}

}  // namespace

TransportPlan solve_transport(const Matrix& cost, const Vector& a, const Vector& b) {
  const Index n0 = a.size();
  const Index n1 = b.size();
  if (cost.rows() != n0 || cost.cols() != n1) {
    throw Error(ErrorCode::InvalidArgument, "cost matrix shape does not match the marginals");
  }
  if ((a.array() < 0.0).any() || (b.array() < 0.0).any() || !a.allFinite() || !b.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "transport marginals must be finite and nonnegative");
  }
  const double mass_a = a.sum();
  const double mass_b = b.sum();
  if (!masses_match(mass_a, mass_b)) {
    throw Error(ErrorCode::InvalidArgument, "transport marginals are unbalanced");
  }

  TransportPlan plan;
  plan.coupling.resize(n0, n1);
  plan.source_potential = Vector::Zero(n0);
  plan.target_potential = Vector::Zero(n1);
  if (mass_a == 0.0 || mass_b == 0.0) return plan;

  const Vector b_scaled = b * (mass_a / mass_b);
  const std::vector<Index> rows = support(a);
  const std::vector<Index> cols = support(b_scaled);

  double max_cost = 0.0;
  for (Index i : rows)
    for (Index j : cols) {
      if (!std::isfinite(cost(i, j)) || cost(i, j) < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "transport costs must be finite and nonnegative");
      }
      max_cost = std::max(max_cost, cost(i, j));
    }
  const double to_int = max_cost > 0.0 ? kCostResolution / max_cost : 0.0;
  const double from_int = max_cost > 0.0 ? max_cost / kCostResolution : 0.0;

  std::vector<std::int64_t> int_cost;
  int_cost.reserve(rows.size() * cols.size());
  for (Index i : rows)
    for (Index j : cols) int_cost.push_back(std::llround(cost(i, j) * to_int));
  std::vector<double> supply;
  std::vector<double> demand;
  for (Index i : rows) supply.push_back(a[i]);
  for (Index j : cols) demand.push_back(b_scaled[j]);

  detail::NetworkSimplex solver(std::move(supply), std::move(demand), std::move(int_cost));
  solver.run();
  if (solver.artificial_flow() > kMassTolerance * mass_a) {
    throw Error(ErrorCode::Convergence, "network simplex left flow on artificial arcs");
  }
  plan.pivots = solver.pivots();

  std::vector<Eigen::Triplet<double>> triplets;
  long double total = 0.0L;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double x = solver.flow(static_cast<int>(r), static_cast<int>(c));
      if (x > 0.0) {
        triplets.emplace_back(rows[r], cols[c], x);
        total += static_cast<long double>(x) * cost(rows[r], cols[c]);
      }
    }
  }
  plan.coupling.setFromTriplets(triplets.begin(), triplets.end());
  plan.total_cost = static_cast<double>(total);

  // Integer potentials are optimal for the rounded costs; two c-transforms
  // against the real costs make them feasible everywhere.
  Vector u = Vector::Constant(n0, kInfinity);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    u[rows[r]] = -static_cast<double>(solver.source_potential(static_cast<int>(r))) * from_int;
  }
  Vector v(n1);
  for (Index j = 0; j < n1; ++j) {
    double best = kInfinity;
    for (Index i : rows) best = std::min(best, cost(i, j) - u[i]);
    v[j] = best;
  }
  for (Index i = 0; i < n0; ++i) {
    double best = kInfinity;
    for (Index j = 0; j < n1; ++j) best = std::min(best, cost(i, j) - v[j]);
    u[i] = best;
  }
  plan.source_potential = u;
  plan.target_potential = v;
  long double dual = 0.0L;
  for (Index i : rows) dual += static_cast<long double>(a[i]) * u[i];
  for (Index j : cols) dual += static_cast<long double>(b_scaled[j]) * v[j];
  plan.dual_value = static_cast<double>(dual);
  plan.duality_gap = plan.total_cost - plan.dual_value;
  return plan;
}

WassersteinResult wasserstein(const MetricMeasureSpace& space, const Vector& rho0, const Vector& rho1,
                              double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "exponent p must be >= 1");
  check_density(space, rho0, "first density");
  check_density(space, rho1, "second density");
  const Vector a = rho0.cwiseProduct(space.measure());
  const Vector b = rho1.cwiseProduct(space.measure());

  WassersteinResult out;
  out.plan.p = p;
  if (!masses_match(a.sum(), b.sum())) {
    out.distance = kInfinity;
    out.plan.total_cost = kInfinity;
    out.plan.coupling.resize(space.size(), space.size());
    out.plan.duality_gap = 0.0;
    return out;
  }
  const Matrix cost = p == 1.0 ? space.dist() : Matrix(space.dist().array().pow(p));
  out.plan = solve_transport(cost, a, b);
  out.plan.p = p;
  out.distance = std::pow(out.plan.total_cost, 1.0 / p);
  return out;
}

double hellinger(const MetricMeasureSpace& space, const Vector& rho0, const Vector& rho1, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw Error(ErrorCode::InvalidArgument, "Hellinger exponent must lie in [1, 2]");
  check_density(space, rho0, "first density");
  check_density(space, rho1, "second density");
  long double sum = 0.0L;
  for (Index i = 0; i < space.size(); ++i) {
    const double d = p == 1.0 ? std::abs(rho0[i] - rho1[i])
                              : std::pow(std::abs(std::pow(rho0[i], 1.0 / p) - std::pow(rho1[i], 1.0 / p)), p);
    sum += static_cast<long double>(d) * space.measure()[i];
  }
  return std::pow(static_cast<double>(sum), 1.0 / p);
}

double hk_cost(double distance, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  const double x = distance / std::sqrt(alpha);
  if (x >= 0.5 * std::numbers::pi) return kInfinity;
  return -2.0 * std::log(std::cos(x));
}

HellingerKantorovichResult hellinger_kantorovich(const MetricMeasureSpace& space, const Vector& rho0,
                                                 const Vector& rho1, double alpha,
                                                 const EntropyTransportSettings& settings) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  if (settings.epsilon < 0.0 || !(settings.epsilon_decay > 0.0 && settings.epsilon_decay < 1.0) ||
      settings.max_iterations < 1 || !(settings.tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid entropy-transport settings");
  }
  check_density(space, rho0, "first density");
  check_density(space, rho1, "second density");

  const Index n = space.size();
  const Vector a = rho0.cwiseProduct(space.measure());
  const Vector b = rho1.cwiseProduct(space.measure());

  // Points with a finite-cost partner in the other support take part in the
  // scaling iterations; everything else is left uncoupled.
  const std::vector<Index> sa = support(a);
  const std::vector<Index> sb = support(b);
  Matrix full_cost(static_cast<Index>(sa.size()), static_cast<Index>(sb.size()));
  for (std::size_t r = 0; r < sa.size(); ++r)
    for (std::size_t c = 0; c < sb.size(); ++c)
      full_cost(static_cast<Index>(r), static_cast<Index>(c)) = hk_cost(space.dist()(sa[r], sb[c]), alpha);
  std::vector<Index> rows;
  std::vector<Index> cols;
  std::vector<Index> row_pos;
  std::vector<Index> col_pos;
  for (std::size_t r = 0; r < sa.size(); ++r)
    if (full_cost.row(static_cast<Index>(r)).array().isFinite().any()) {
      rows.push_back(sa[r]);
      row_pos.push_back(static_cast<Index>(r));
    }
  for (std::size_t c = 0; c < sb.size(); ++c)
    if (full_cost.col(static_cast<Index>(c)).array().isFinite().any()) {
      cols.push_back(sb[c]);
      col_pos.push_back(static_cast<Index>(c));
    }
  const Index n0 = static_cast<Index>(rows.size());
  const Index n1 = static_cast<Index>(cols.size());
  Matrix cost(n0, n1);
  for (Index r = 0; r < n0; ++r)
    for (Index c = 0; c < n1; ++c) cost(r, c) = full_cost(row_pos[r], col_pos[c]);

  double max_finite = 0.0;
  for (Index r = 0; r < n0; ++r)
    for (Index c = 0; c < n1; ++c)
      if (std::isfinite(cost(r, c))) max_finite = std::max(max_finite, cost(r, c));
  const double scale = max_finite > 0.0 ? std::min(1.0, max_finite) : 1.0;
  const double eps_target = settings.epsilon > 0.0 ? settings.epsilon : 1e-3 * scale;

  Vector log_a(n0);
  Vector log_b(n1);
  Vector ra(n0);
  Vector rb(n1);
  for (Index r = 0; r < n0; ++r) {
    ra[r] = a[rows[r]];
    log_a[r] = std::log(ra[r]);
  }
  for (Index c = 0; c < n1; ++c) {
    rb[c] = b[cols[c]];
    log_b[c] = std::log(rb[c]);
  }

  HellingerKantorovichResult result;
  EntropyTransportSolution& sol = result.solution;
  sol.coupling = Matrix::Zero(n, n);
  sol.epsilon = eps_target;

  Vector f = Vector::Zero(n0);
  Vector g = Vector::Zero(n1);
  Vector lse_row(n0);
  Vector lse_col(n1);
  const double total_mass = a.sum() + b.sum();

  if (n0 > 0 && n1 > 0) {
    double eps = std::max(1.0, eps_target);
    // Both orientations stored so every log-sum-exp reads contiguous memory.
    Matrix scaled(n0, n1);
    Matrix scaled_t(n1, n0);
    Eigen::ArrayXd row_buffer(n1);
    Eigen::ArrayXd col_buffer(n0);
    for (;;) {
      const bool last_stage = eps <= eps_target;
      const double damp = eps / (1.0 + eps);
      scaled = -cost / eps;
      scaled_t = scaled.transpose();
      sol.objective_trace.clear();
      bool converged = false;
      for (int it = 0; it < settings.max_iterations; ++it) {
        const Eigen::ArrayXd col_term = log_b.array() + g.array() / eps;
        for (Index r = 0; r < n0; ++r) {
          row_buffer = scaled_t.col(r).array() + col_term;
          lse_row[r] = log_sum_exp(row_buffer);
        }
        if (it > 0) {
          // Optimality of f: row marginal equals a e^{-f}.
          double residual = 0.0;
          for (Index r = 0; r < n0; ++r) {
            residual += ra[r] * std::abs(std::exp(f[r] / eps + lse_row[r]) - std::exp(-f[r]));
          }
          if (residual < settings.tolerance * total_mass) {
            converged = true;
            break;
          }
        }
        f = -damp * lse_row;
        const Eigen::ArrayXd row_term = log_a.array() + f.array() / eps;
        for (Index c = 0; c < n1; ++c) {
          col_buffer = scaled.col(c).array() + row_term;
          lse_col[c] = log_sum_exp(col_buffer);
        }
        g = -damp * lse_col;

        // Exact ascent along (f + s, g - s), which leaves f_i + g_j fixed;
        // plain alternating updates contract this direction only by 1/(1+eps).
        const double shift = 0.5 * (std::log(ra.dot((-f.array()).exp().matrix())) -
                                    std::log(rb.dot((-g.array()).exp().matrix())));
        f.array() += shift;
        g.array() -= shift;
        ++sol.iterations;
        if (last_stage) {
          double mass = 0.0;
          for (Index c = 0; c < n1; ++c) mass += std::exp(log_b[c] + (g[c] + shift) / eps + lse_col[c]);
          const double dual = -ra.dot((-f.array()).exp().matrix()) - rb.dot((-g.array()).exp().matrix()) +
                              ra.sum() + rb.sum() - eps * (mass - ra.sum() * rb.sum());
          sol.objective_trace.push_back(-dual);
        }
      }
      if (last_stage) {
        sol.converged = converged;
        break;
      }
      eps = std::max(eps_target, eps * settings.epsilon_decay);
    }

    for (Index r = 0; r < n0; ++r) {
      for (Index c = 0; c < n1; ++c) {
        if (!std::isfinite(cost(r, c))) continue;
        sol.coupling(rows[r], cols[c]) = std::exp(log_a[r] + log_b[c] + (f[r] + g[c] - cost(r, c)) / eps_target);
      }
    }
  } else {
    sol.converged = true;
  }

  const Vector gamma0 = sol.coupling.rowwise().sum();
  const Vector gamma1 = sol.coupling.colwise().sum().transpose();
  sol.kl_source = kl_divergence(gamma0, a);
  sol.kl_target = kl_divergence(gamma1, b);
  long double transport = 0.0L;
  for (Index r = 0; r < n0; ++r)
    for (Index c = 0; c < n1; ++c) {
      const double gamma = sol.coupling(rows[r], cols[c]);
      if (gamma > 0.0) transport += static_cast<long double>(gamma) * cost(r, c);
    }
  sol.transport_cost = static_cast<double>(transport);
  sol.objective = sol.kl_source + sol.kl_target + sol.transport_cost;

  // Feasible pair for the unregularized dual via c-transforms of f.
  long double bound = 0.0L;
  Vector phi = f;
  Vector psi(n1);
  for (Index c = 0; c < n1; ++c) {
    double best = kInfinity;
    for (Index r = 0; r < n0; ++r)
      if (std::isfinite(cost(r, c))) best = std::min(best, cost(r, c) - phi[r]);
    psi[c] = best;
  }
  for (Index r = 0; r < n0; ++r) {
    double best = kInfinity;
    for (Index c = 0; c < n1; ++c)
      if (std::isfinite(cost(r, c))) best = std::min(best, cost(r, c) - psi[c]);
    phi[r] = best;
  }
  for (Index r = 0; r < n0; ++r) bound += static_cast<long double>(ra[r]) * -std::expm1(-phi[r]);
  for (Index c = 0; c < n1; ++c) bound += static_cast<long double>(rb[c]) * -std::expm1(-psi[c]);
  // Uncoupled points sit at phi = +inf and contribute their full mass.
  const double active = ra.sum() + rb.sum();
  sol.dual_bound = static_cast<double>(bound) + (total_mass - active);

  result.distance = std::sqrt(std::max(sol.objective, 0.0));
  result.bias_bound = 10.0 * eps_target;
  return result;
}

double wasserstein_oracle_1d(const MetricMeasureSpace& space, const Vector& rho0, const Vector& rho1, double p) {
  if (!space.line()) throw Error(ErrorCode::Unsupported, "1D oracle needs a catalog circle or interval");
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "exponent p must be >= 1");
  check_density(space, rho0, "first density");
  check_density(space, rho1, "second density");
  const LineEmbedding& line = *space.line();
  const Index n = space.size();
  const Vector a = rho0.cwiseProduct(space.measure());
  Vector b = rho1.cwiseProduct(space.measure());
  if (!masses_match(a.sum(), b.sum())) return kInfinity;
  if (b.sum() > 0.0) b *= a.sum() / b.sum();

  if (line.kind == LineKind::Circle) {
    if (p != 1.0) throw Error(ErrorCode::Unsupported, "circle oracle covers p = 1 only");
    // W_1 = min_c sum_k |F_k - c| gap_k, minimized at a weighted median.
    std::vector<double> cumulative(static_cast<std::size_t>(n));
    std::vector<double> gap(static_cast<std::size_t>(n));
    long double running = 0.0L;
    for (Index k = 0; k < n; ++k) {
      running += static_cast<long double>(a[k]) - b[k];
      cumulative[k] = static_cast<double>(running);
      gap[k] = k + 1 < n ? line.position[k + 1] - line.position[k]
                         : line.length - line.position[n - 1] + line.position[0];
    }
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return cumulative[x] < cumulative[y]; });
    const double half = 0.5 * std::accumulate(gap.begin(), gap.end(), 0.0);
    double seen = 0.0;
    double offset = cumulative[order.back()];
    for (std::size_t k : order) {
      seen += gap[k];
      if (seen >= half) {
        offset = cumulative[k];
        break;
      }
    }
    long double total = 0.0L;
    for (Index k = 0; k < n; ++k) total += static_cast<long double>(std::abs(cumulative[k] - offset)) * gap[k];
    return static_cast<double>(total);
  }

  // Interval: merge the two quantile functions.
  long double total = 0.0L;
  Index i = 0;
  Index j = 0;
  double left_a = n > 0 ? a[0] : 0.0;
  double left_b = n > 0 ? b[0] : 0.0;
  while (i < n && j < n) {
    if (left_a <= 0.0) {
      if (++i < n) left_a = a[i];
      continue;
    }
    if (left_b <= 0.0) {
      if (++j < n) left_b = b[j];
      continue;
    }
    const double q = std::min(left_a, left_b);
    total += static_cast<long double>(q) * pow_cost(std::abs(line.position[i] - line.position[j]), p);
    left_a -= q;
    left_b -= q;
  }
  return std::pow(static_cast<double>(total), 1.0 / p);
}

}  // namespace tlab
