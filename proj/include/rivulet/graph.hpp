#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "rivulet/errors.hpp"
#include "rivulet/rng.hpp"
#include "rivulet/types.hpp"

namespace rivulet {

struct InEdge {
  NodeId src;
  double w;
};

// Weighted digraph under a stream of weight updates.  Only in-adjacency is
// kept: reverse sampling never needs out-neighbors.  Under LT each node also
// carries a self-weight w_v; the total W_v = w_v + sum of incoming weights is
// maintained incrementally and recomputed from scratch every 2^20 updates to
// cap float drift.  Edges whose weight reaches 0 are physically removed, so
// weight 0 and absence are indistinguishable by design.
class DynamicGraph {
 public:
  DynamicGraph(NodeId n, Model model);

  NodeId num_nodes() const { return n_; }
  Model model() const { return model_; }

  UpdateDelta apply_update(const WeightUpdate& up);

  const std::vector<InEdge>& in_neighbors(NodeId v) const;
  std::size_t in_degree(NodeId v) const { return in_neighbors(v).size(); }
  double edge_weight(NodeId u, NodeId v) const;  // 0 when absent
  double self_weight(NodeId v) const;
  double total_weight(NodeId v) const;  // LT: w_v + sum of in-weights
  std::size_t num_edges() const { return m_; }

  // Draw v's live-edge pick: in-neighbor u with probability w_uv/W_v, nullopt
  // (the self share) with probability w_v/W_v.  W_v == 0 always yields nullopt.
  std::optional<NodeId> sample_previous_node_lt(NodeId v, Rng& rng) const;

  void recompute_totals();  // exposed for tests

  template <typename Fn>  // fn(u, v, w) over all edges, v-major
  void for_each_edge(Fn&& fn) const {
    for (NodeId v = 0; v < n_; ++v)
      for (const InEdge& e : in_adj_[v]) fn(e.src, v, e.w);
  }

 private:
  void check_node(NodeId x) const;

  NodeId n_;
  Model model_;
  std::size_t m_ = 0;
  std::vector<std::vector<InEdge>> in_adj_;
  std::vector<std::unordered_map<NodeId, std::uint32_t>> in_pos_;  // src -> slot
  std::vector<double> self_w_;   // LT only
  std::vector<double> total_w_;  // LT only
  std::uint64_t updates_seen_ = 0;
};

}  // namespace rivulet
