#pragma once

#include <cstdint>
#include <vector>

namespace tlab::detail {

/// Primal network simplex for the uncapacitated transportation problem
///
///   min sum_ij c_ij x_ij  s.t.  sum_j x_ij = a_i,  sum_i x_ij = b_j,  x >= 0
///
/// on the complete bipartite graph. Costs are integers so reduced costs are
/// exact; flows are doubles. Spanning-tree bookkeeping (thread, reverse
/// thread, successor counts) follows the classic LEMON layout with an
/// artificial root, and entering arcs are chosen by block search scanning
/// arcs in index order, so the run is deterministic.
class NetworkSimplex {
 public:
  enum class Status { Optimal, Infeasible };

  NetworkSimplex(std::vector<double> supply, std::vector<double> demand, std::vector<std::int64_t> cost);

  Status run();

  int sources() const { return n0_; }
  int sinks() const { return n1_; }
  double flow(int i, int j) const { return flow_[static_cast<std::size_t>(i) * n1_ + j]; }
  /// Node potentials in the convention c_ij + pi_i - pi_j >= 0.
  std::int64_t source_potential(int i) const { return pi_[i]; }
  std::int64_t sink_potential(int j) const { return pi_[n0_ + j]; }
  long pivots() const { return pivots_; }
  /// Largest flow left on an artificial arc.
  double artificial_flow() const;

 private:
  static constexpr int kStateUpper = -1;
  static constexpr int kStateTree = 0;
  static constexpr int kStateLower = 1;
  static constexpr int kDirUp = 1;
  static constexpr int kDirDown = -1;

  int arc_source(std::int64_t e) const;
  int arc_target(std::int64_t e) const;
  std::int64_t arc_cost(std::int64_t e) const;
  double& arc_flow(std::int64_t e);

  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow(bool change);
  void update_tree_structure();
  void update_potential();

  int n0_;
  int n1_;
  int node_num_;
  int root_;
  std::int64_t arc_num_;

  std::vector<double> supply_;
  std::vector<std::int64_t> cost_;
  std::vector<double> flow_;  // real arcs then artificial arcs
  std::vector<signed char> state_;

  // artificial arc per node: source/target/cost
  std::vector<int> art_source_;
  std::vector<int> art_target_;
  std::vector<std::int64_t> art_cost_;

  std::vector<std::int64_t> pi_;
  std::vector<int> parent_;
  std::vector<std::int64_t> pred_;
  std::vector<int> pred_dir_;
  std::vector<int> thread_;
  std::vector<int> rev_thread_;
  std::vector<int> succ_num_;
  std::vector<int> last_succ_;
  std::vector<int> dirty_revs_;

  std::int64_t block_size_ = 0;
  std::int64_t next_arc_ = 0;
  std::int64_t in_arc_ = 0;
  int join_ = 0;
  int u_in_ = 0;
  int v_in_ = 0;
  int u_out_ = 0;
  double delta_ = 0.0;
  long pivots_ = 0;
};

}  // namespace tlab::detail
