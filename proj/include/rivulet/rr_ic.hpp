#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rivulet/rr_collection.hpp"

namespace rivulet {

// An IC reverse-reachable sample is the connected component of live edges
// around the start, discovered by reverse BFS.  A node is a member iff it has
// a live_in entry (possibly empty).  Each live edge (src -> key) is labeled:
// bfs = true when sampling it discovered src, false for edges between nodes
// already in (cross edges).  The bfs edges form an in-tree on the members
// rooted at start, so dropping a cross edge can never disconnect anything.
struct LiveEdge {
  NodeId src;
  bool bfs;
};

struct RRSetIC {
  NodeId start = 0;
  std::unordered_map<NodeId, std::vector<LiveEdge>> live_in;

  bool contains(NodeId u) const { return live_in.count(u) != 0; }
  std::vector<NodeId> members_sorted() const;
};

class IcCollection : public RrCollectionBase {
 public:
  IcCollection(const DynamicGraph* g, Rng rng) : RrCollectionBase(g, rng) {}

  SetId add_fresh() override;
  SetId remove_last() override;
  void restore_last_removed() override;
  void apply_delta(const UpdateDelta& d) override;
  void check_consistency() const override;

  const std::map<SetId, RRSetIC>& sets() const { return sets_; }
  const RRSetIC& set(SetId id) const;

 private:
  // reverse-BFS from seeds, sampling undecided in-edges; returns new members
  std::vector<NodeId> expand(RRSetIC& s, NodeId seed);
  void handle_increase(const UpdateDelta& d);
  void handle_decrease(const UpdateDelta& d);

  std::map<SetId, RRSetIC> sets_;
  std::optional<std::pair<SetId, RRSetIC>> stash_;
};

}  // namespace rivulet
