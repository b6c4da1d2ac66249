#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rivulet/rr_collection.hpp"

namespace rivulet {

// An LT reverse-reachable sample is a simple path.  path[0] is the start;
// path[i+1] is the live-edge pick of path[i].  prev_of_last records the pick
// of the final node: nullopt when it drew its self share, otherwise an earlier
// path node (the walk closed a cycle).  Every node's recorded pick is thus
// recoverable from its path position alone.
struct RRSetLT {
  std::vector<NodeId> path;
  std::optional<NodeId> prev_of_last;
};

class LtCollection : public RrCollectionBase {
 public:
  LtCollection(const DynamicGraph* g, Rng rng) : RrCollectionBase(g, rng) {}

  SetId add_fresh() override;
  SetId remove_last() override;
  void restore_last_removed() override;
  void apply_delta(const UpdateDelta& d) override;
  void check_consistency() const override;

  const std::map<SetId, RRSetLT>& sets() const { return sets_; }
  const RRSetLT& set(SetId id) const;

 private:
  void extend_from_last(RRSetLT& s);
  void handle_increase(const UpdateDelta& d);
  void handle_decrease(const UpdateDelta& d);
  void commit_path_change(SetId id, RRSetLT& s, std::vector<NodeId> old_path_nodes);

  std::map<SetId, RRSetLT> sets_;
  std::optional<std::pair<SetId, RRSetLT>> stash_;
};

}  // namespace rivulet
