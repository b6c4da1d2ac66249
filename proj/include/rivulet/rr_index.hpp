#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "rivulet/degree_buckets.hpp"
#include "rivulet/errors.hpp"
#include "rivulet/types.hpp"

namespace rivulet {

// Shared bookkeeping over a collection of RR sets: the inverted index
// node -> ids of sets containing it, the coverage degree D(u) = |that list|,
// and a DegreeBucketList ranking nodes by D(u).  F(u) = D(u)/M where M is the
// number of registered sets.  Set payloads live with their collections; calls
// that shrink or drop a set pass the member list in.
class RRIndex {
 public:
  explicit RRIndex(NodeId n);

  void register_set(SetId id, std::span<const NodeId> members);
  void unregister_set(SetId id, std::span<const NodeId> members);
  // members that left / joined an existing set
  void diff_membership(SetId id, std::span<const NodeId> removed,
                       std::span<const NodeId> added);

  std::size_t size() const { return m_; }
  bool contains_set(SetId id) const { return ids_.count(id) != 0; }
  NodeId num_nodes() const { return ranking_.num_nodes(); }

  std::uint64_t degree(NodeId u) const;
  double fraction(NodeId u) const;       // D(u)/M
  double max_fraction() const;           // F* ; EmptyCollection when M == 0
  double kth_fraction(std::uint64_t k) const;
  // (node, fraction) sorted by fraction desc, ties by ascending id
  std::vector<std::pair<NodeId, double>> top_fraction(std::size_t k) const;
  std::vector<NodeId> nodes_with_degree_at_least(std::uint64_t cutoff) const;

  // ids of sets containing u, ascending (snapshot; safe to mutate the index
  // while iterating the result)
  std::vector<SetId> sets_containing_sorted(NodeId u) const;
  const std::unordered_set<SetId>& sets_containing(NodeId u) const;

  const DegreeBucketList& ranking() const { return ranking_; }

 private:
  void check_known(SetId id) const;

  std::vector<std::unordered_set<SetId>> containing_;
  std::unordered_set<SetId> ids_;
  DegreeBucketList ranking_;
  std::size_t m_ = 0;
};

}  // namespace rivulet
