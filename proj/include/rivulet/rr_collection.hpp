#pragma once

#include <cstdint>
#include <memory>

#include "rivulet/graph.hpp"
#include "rivulet/rng.hpp"
#include "rivulet/rr_index.hpp"
#include "rivulet/types.hpp"

namespace rivulet {

// Counters over maintenance work, reset at will.  retrieved counts sets pulled
// through the inverted index per update, updated counts sets whose structure
// actually changed, traversals counts IC full re-traversals.
struct MaintenanceStats {
  std::uint64_t retrieved = 0;
  std::uint64_t updated = 0;
  std::uint64_t traversals = 0;
  std::uint64_t generated = 0;
  void reset() { *this = MaintenanceStats{}; }
};

// A collection of RR sets kept consistent with a DynamicGraph as weight
// updates land.  Ids are assigned monotonically, so the "last" set is the one
// with the highest id.  remove_last stashes its victim so an adaptive caller
// can cheaply back out one deletion.
class RrCollectionBase {
 public:
  RrCollectionBase(const DynamicGraph* g, Rng rng)
      : g_(g), rng_(rng), index_(g->num_nodes()) {}
  virtual ~RrCollectionBase() = default;

  virtual SetId add_fresh() = 0;
  virtual SetId remove_last() = 0;          // EmptyCollection when empty
  virtual void restore_last_removed() = 0;  // undo the most recent remove_last
  virtual void apply_delta(const UpdateDelta& d) = 0;
  virtual void check_consistency() const = 0;  // test support; throws

  std::size_t size() const { return index_.size(); }
  const RRIndex& index() const { return index_; }
  const MaintenanceStats& stats() const { return stats_; }
  void reset_stats() { stats_.reset(); }
  std::uint64_t member_entries() const { return member_entries_; }
  const DynamicGraph& graph() const { return *g_; }

 protected:
  const DynamicGraph* g_;
  Rng rng_;
  RRIndex index_;
  MaintenanceStats stats_;
  SetId next_id_ = 0;
  std::uint64_t member_entries_ = 0;
};

// LtCollection or IcCollection per g->model()
std::unique_ptr<RrCollectionBase> make_collection(const DynamicGraph* g, Rng rng);

}  // namespace rivulet
