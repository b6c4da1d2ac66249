#pragma once

#include <cstdint>
#include <limits>

namespace rivulet {

using NodeId = std::uint32_t;
using SetId = std::uint64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class Model { LT, IC };

// One record of the update stream: at time t the weight of edge (u,v) grows or
// shrinks by delta.  u == v addresses the self-weight of u (LT only).
struct WeightUpdate {
  std::uint64_t t = 0;
  NodeId u = 0;
  NodeId v = 0;
  bool increase = true;
  double delta = 0.0;
};

// What apply_update actually did; consumed by the RR maintenance routines,
// which need both the pre- and post-update weights.
struct UpdateDelta {
  NodeId u = 0;
  NodeId v = 0;
  bool increase = true;
  bool self = false;  // LT self-weight update (u == v)
  double delta = 0.0;
  double w_before = 0.0;  // weight of (u,v) (or self-weight) before
  double w_after = 0.0;
  double W_before = 0.0;  // LT only: total incoming weight of v before/after
  double W_after = 0.0;
};

}  // namespace rivulet
