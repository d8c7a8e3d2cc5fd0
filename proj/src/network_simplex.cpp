#include "tlab/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tlab::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NetworkSimplex::NetworkSimplex(std::vector<double> supply, std::vector<double> demand,
                               std::vector<std::int64_t> cost)
    : n0_(static_cast<int>(supply.size())),
      n1_(static_cast<int>(demand.size())),
      node_num_(n0_ + n1_),
      root_(n0_ + n1_),
      arc_num_(static_cast<std::int64_t>(n0_) * n1_),
      cost_(std::move(cost)) {
  if (static_cast<std::int64_t>(cost_.size()) != arc_num_) {
    throw std::invalid_argument("cost size must equal sources * sinks");
  }
  supply_.resize(static_cast<std::size_t>(node_num_) + 1);
  for (int i = 0; i < n0_; ++i) supply_[i] = supply[i];
  for (int j = 0; j < n1_; ++j) supply_[n0_ + j] = -demand[j];

  const std::size_t all_arcs = static_cast<std::size_t>(arc_num_) + node_num_;
  const std::size_t all_nodes = static_cast<std::size_t>(node_num_) + 1;
  flow_.assign(all_arcs, 0.0);
  state_.assign(all_arcs, static_cast<signed char>(kStateLower));
  art_source_.resize(node_num_);
  art_target_.resize(node_num_);
  art_cost_.resize(node_num_);
  pi_.assign(all_nodes, 0);
  parent_.assign(all_nodes, -1);
  pred_.assign(all_nodes, -1);
  pred_dir_.assign(all_nodes, 0);
  thread_.assign(all_nodes, 0);
  rev_thread_.assign(all_nodes, 0);
  succ_num_.assign(all_nodes, 0);
  last_succ_.assign(all_nodes, 0);

  std::int64_t max_cost = 0;
  for (std::int64_t c : cost_) {
    if (c < 0) throw std::invalid_argument("costs must be nonnegative");
    max_cost = std::max(max_cost, c);
  }
  const std::int64_t art_cost = (max_cost + 1) * (node_num_ + 1);

  parent_[root_] = -1;
  pred_[root_] = -1;
  thread_[root_] = 0;
  rev_thread_[0] = root_;
  succ_num_[root_] = node_num_ + 1;
  last_succ_[root_] = root_ - 1;
  pi_[root_] = 0;
  for (int u = 0; u < node_num_; ++u) {
    const std::int64_t e = arc_num_ + u;
    parent_[u] = root_;
    pred_[u] = e;
    thread_[u] = u + 1;
    rev_thread_[u + 1] = u;
    succ_num_[u] = 1;
    last_succ_[u] = u;
    state_[e] = kStateTree;
    if (supply_[u] >= 0.0) {
      pred_dir_[u] = kDirUp;
      pi_[u] = 0;
      art_source_[u] = u;
      art_target_[u] = root_;
      flow_[e] = supply_[u];
      art_cost_[u] = 0;
    } else {
      pred_dir_[u] = kDirDown;
      pi_[u] = art_cost;
      art_source_[u] = root_;
      art_target_[u] = u;
      flow_[e] = -supply_[u];
      art_cost_[u] = art_cost;
    }
  }

  block_size_ = std::max<std::int64_t>(
      static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(arc_num_)))), 10);
}

int NetworkSimplex::arc_source(std::int64_t e) const {
  return e < arc_num_ ? static_cast<int>(e / n1_) : art_source_[e - arc_num_];
}

int NetworkSimplex::arc_target(std::int64_t e) const {
  return e < arc_num_ ? n0_ + static_cast<int>(e % n1_) : art_target_[e - arc_num_];
}

std::int64_t NetworkSimplex::arc_cost(std::int64_t e) const {
  return e < arc_num_ ? cost_[e] : art_cost_[e - arc_num_];
}

double& NetworkSimplex::arc_flow(std::int64_t e) { return flow_[e]; }

bool NetworkSimplex::find_entering_arc() {
  std::int64_t min = 0;
  std::int64_t cnt = block_size_;
  std::int64_t e = next_arc_;
  auto scan = [&](std::int64_t begin, std::int64_t end) {
    for (e = begin; e != end; ++e) {
      // Real arcs run source i -> sink j; inlined for the hot loop.
      const std::int64_t c =
          state_[e] * (cost_[e] + pi_[e / n1_] - pi_[n0_ + e % n1_]);
      if (c < min) {
        min = c;
        in_arc_ = e;
      }
      if (--cnt == 0) {
        if (min < 0) return true;
        cnt = block_size_;
      }
    }
    return false;
  };
  if (scan(next_arc_, arc_num_) || scan(0, next_arc_)) {
    next_arc_ = e;
    return true;
  }
  if (min >= 0) return false;
  next_arc_ = e;
  return true;
}

void NetworkSimplex::find_join_node() {
  int u = arc_source(in_arc_);
  int v = arc_target(in_arc_);
  while (u != v) {
    if (succ_num_[u] < succ_num_[v]) {
      u = parent_[u];
    } else {
      v = parent_[v];
    }
  }
  join_ = u;
}

bool NetworkSimplex::find_leaving_arc() {
  // Uncapacitated: the entering arc is always at its lower bound.
  const int first = arc_source(in_arc_);
  const int second = arc_target(in_arc_);
  delta_ = kInf;
  int result = 0;
  for (int u = first; u != join_; u = parent_[u]) {
    const double d = pred_dir_[u] == kDirUp ? flow_[pred_[u]] : kInf;
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[u]) {
    const double d = pred_dir_[u] == kDirDown ? flow_[pred_[u]] : kInf;
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void NetworkSimplex::change_flow(bool change) {
  if (delta_ > 0.0) {
    const double val = state_[in_arc_] * delta_;
    flow_[in_arc_] += val;
    for (int u = arc_source(in_arc_); u != join_; u = parent_[u]) flow_[pred_[u]] -= pred_dir_[u] * val;
    for (int u = arc_target(in_arc_); u != join_; u = parent_[u]) flow_[pred_[u]] += pred_dir_[u] * val;
  }
  if (change) {
    state_[in_arc_] = kStateTree;
    const std::int64_t out = pred_[u_out_];
    flow_[out] = 0.0;
    state_[out] = kStateLower;
  } else {
    state_[in_arc_] = static_cast<signed char>(-state_[in_arc_]);
  }
}

void NetworkSimplex::update_tree_structure() {
  const int old_rev_thread = rev_thread_[u_out_];
  const int old_succ_num = succ_num_[u_out_];
  const int old_last_succ = last_succ_[u_out_];
  const int v_out = parent_[u_out_];

  if (u_in_ == u_out_) {
    parent_[u_in_] = v_in_;
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == arc_source(in_arc_) ? kDirUp : kDirDown;

    if (thread_[v_in_] != u_out_) {
      int after = thread_[old_last_succ];
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
      after = thread_[v_in_];
      thread_[v_in_] = u_out_;
      rev_thread_[u_out_] = v_in_;
      thread_[old_last_succ] = after;
      rev_thread_[after] = old_last_succ;
    }
  } else {
    // When old_rev_thread is v_in, join and v_out coincide.
    const int thread_continue = old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

    // Re-hang the stem u_in .. u_out under v_in, reversing parent links.
    int stem = u_in_;
    int par_stem = v_in_;
    int last = last_succ_[u_in_];
    int after = thread_[last];
    thread_[v_in_] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      const int next_stem = parent_[stem];
      thread_[last] = next_stem;
      dirty_revs_.push_back(last);

      const int before = rev_thread_[stem];
      thread_[before] = after;
      rev_thread_[after] = before;

      parent_[stem] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
      after = thread_[last];
    }
    parent_[u_out_] = par_stem;
    thread_[last] = thread_continue;
    rev_thread_[thread_continue] = last;
    last_succ_[u_out_] = last;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
    }

    for (int u : dirty_revs_) rev_thread_[thread_[u]] = u;

    int tmp_sc = 0;
    const int tmp_ls = last_succ_[u_out_];
    for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
      pred_[u] = pred_[p];
      pred_dir_[u] = -pred_dir_[p];
      tmp_sc += succ_num_[u] - succ_num_[p];
      succ_num_[u] = tmp_sc;
      last_succ_[p] = tmp_ls;
    }
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == arc_source(in_arc_) ? kDirUp : kDirDown;
    succ_num_[u_in_] = old_succ_num;
  }

  const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
  const int last_succ_out = last_succ_[u_out_];
  for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) last_succ_[u] = last_succ_out;

  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (int u = v_out; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = old_rev_thread;
    }
  } else if (last_succ_out != old_last_succ) {
    for (int u = v_out; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = last_succ_out;
    }
  }

  for (int u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
  for (int u = v_out; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

void NetworkSimplex::update_potential() {
  const std::int64_t sigma = pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * arc_cost(in_arc_);
  const int end = thread_[last_succ_[u_in_]];
  for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

NetworkSimplex::Status NetworkSimplex::run() {
  if (arc_num_ == 0) return Status::Optimal;
  while (find_entering_arc()) {
    find_join_node();
    const bool change = find_leaving_arc();
    if (!change) throw std::logic_error("unbounded transportation problem");
    change_flow(change);
    update_tree_structure();
    update_potential();
    ++pivots_;
  }
  return Status::Optimal;
}

double NetworkSimplex::artificial_flow() const {
  double worst = 0.0;
  for (int u = 0; u < node_num_; ++u) worst = std::max(worst, std::abs(flow_[arc_num_ + u]));
  return worst;
}

}  // namespace tlab::detail
