#include "rivulet/graph.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace rivulet {

namespace {
constexpr double kZeroEps = 1e-12;     // at or below this a weight counts as gone
constexpr double kSlackRel = 1e-9;     // tolerance for decrease/overflow checks
constexpr std::uint64_t kRecomputeEvery = 1ull << 20;
}  // namespace

DynamicGraph::DynamicGraph(NodeId n, Model model)
    : n_(n), model_(model), in_adj_(n), in_pos_(n) {
  if (model_ == Model::LT) {
    self_w_.assign(n, 0.0);
    total_w_.assign(n, 0.0);
  }
}

void DynamicGraph::check_node(NodeId x) const {
  if (x >= n_) throw Error(Errc::UnknownNode, "node " + std::to_string(x) + " out of range (n=" + std::to_string(n_) + ")");
}

const std::vector<InEdge>& DynamicGraph::in_neighbors(NodeId v) const {
  check_node(v);
  return in_adj_[v];
}

double DynamicGraph::edge_weight(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  auto it = in_pos_[v].find(u);
  return it == in_pos_[v].end() ? 0.0 : in_adj_[v][it->second].w;
}

double DynamicGraph::self_weight(NodeId v) const {
  check_node(v);
  return model_ == Model::LT ? self_w_[v] : 0.0;
}

double DynamicGraph::total_weight(NodeId v) const {
  check_node(v);
  return model_ == Model::LT ? total_w_[v] : 0.0;
}

UpdateDelta DynamicGraph::apply_update(const WeightUpdate& up) {
  check_node(up.u);
  check_node(up.v);
  assert(up.delta > 0.0);

  UpdateDelta d;
  d.u = up.u;
  d.v = up.v;
  d.increase = up.increase;
  d.self = (up.u == up.v);
  d.delta = up.delta;
  if (d.self && model_ == Model::IC)
    throw Error(Errc::SelfWeightInIC, "self-weight update on IC graph");

  const NodeId v = up.v;
  d.W_before = model_ == Model::LT ? total_w_[v] : 0.0;

  double w_before;
  if (d.self) {
    w_before = self_w_[v];
  } else {
    auto it = in_pos_[v].find(up.u);
    w_before = it == in_pos_[v].end() ? 0.0 : in_adj_[v][it->second].w;
  }
  d.w_before = w_before;

  double w_after;
  if (up.increase) {
    w_after = w_before + up.delta;
    if (model_ == Model::IC && w_after > 1.0 + kSlackRel)
      throw Error(Errc::ProbabilityOverflow, "edge weight would exceed 1");
    if (model_ == Model::IC && w_after > 1.0) w_after = 1.0;
  } else {
    if (up.delta > w_before + kSlackRel * std::max(1.0, w_before))
      throw Error(Errc::NegativeResultingWeight, "decrease below zero");
    w_after = w_before - up.delta;
    if (w_after <= kZeroEps) w_after = 0.0;
  }
  d.w_after = w_after;

  if (d.self) {
    self_w_[v] = w_after;
  } else if (w_after == 0.0) {
    // drop the edge; swap-pop keeps slots dense
    auto it = in_pos_[v].find(up.u);
    if (it != in_pos_[v].end()) {
      std::uint32_t slot = it->second;
      std::uint32_t last = static_cast<std::uint32_t>(in_adj_[v].size()) - 1;
      if (slot != last) {
        in_adj_[v][slot] = in_adj_[v][last];
        in_pos_[v][in_adj_[v][slot].src] = slot;
      }
      in_adj_[v].pop_back();
      in_pos_[v].erase(it);
      --m_;
    }
  } else {
    auto it = in_pos_[v].find(up.u);
    if (it == in_pos_[v].end()) {
      in_pos_[v].emplace(up.u, static_cast<std::uint32_t>(in_adj_[v].size()));
      in_adj_[v].push_back({up.u, w_after});
      ++m_;
    } else {
      in_adj_[v][it->second].w = w_after;
    }
  }

  if (model_ == Model::LT) {
    total_w_[v] += up.increase ? up.delta : -up.delta;
    if (total_w_[v] < 0.0) total_w_[v] = 0.0;
    if (++updates_seen_ % kRecomputeEvery == 0) recompute_totals();
    d.W_after = total_w_[v];
  }
  return d;
}

void DynamicGraph::recompute_totals() {
  if (model_ != Model::LT) return;
  for (NodeId v = 0; v < n_; ++v) {
    double t = self_w_[v];
    for (const InEdge& e : in_adj_[v]) t += e.w;
    total_w_[v] = t;
  }
}

std::optional<NodeId> DynamicGraph::sample_previous_node_lt(NodeId v, Rng& rng) const {
  assert(model_ == Model::LT);
  check_node(v);
  double total = total_w_[v];
  if (total <= 0.0) return std::nullopt;
  double x = rng.uniform01() * total;
  for (const InEdge& e : in_adj_[v]) {
    x -= e.w;
    if (x < 0.0) return e.src;
  }
  // landed in the self share; guard the fp leftover when that share is empty
  if (self_w_[v] > 0.0 || in_adj_[v].empty()) return std::nullopt;
  return in_adj_[v].back().src;
}

}  // namespace rivulet
