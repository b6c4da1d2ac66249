#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rivulet/types.hpp"

namespace rivulet {

// Nodes keyed by an integer degree that moves by +-1 at a time.  One doubly
// linked list of nodes per distinct nonzero degree; the bucket heads form a
// second doubly linked list sorted by degree descending.  Because a degree
// change is +-1, the destination bucket is always adjacent to the source one,
// so relocation is O(1) pointer surgery.  Degree-0 nodes live outside the
// structure (implicit tail bucket) and are materialized only when a query
// needs them.  Within a bucket the order is arbitrary; queries that expose
// node lists sort ties by ascending id.
class DegreeBucketList {
 public:
  explicit DegreeBucketList(NodeId n);

  void increment(NodeId u);
  void decrement(NodeId u);

  std::uint64_t degree(NodeId u) const { return deg_[u]; }
  std::uint64_t max_degree() const;
  std::uint64_t kth_degree(std::uint64_t k) const;  // k >= 1; 0 past the end
  std::vector<NodeId> top_nodes(std::size_t k) const;
  std::vector<NodeId> nodes_with_degree_at_least(std::uint64_t cutoff) const;

  NodeId num_nodes() const { return n_; }
  std::size_t distinct_degrees() const { return n_buckets_; }
  std::uint64_t structural_mutations() const { return mut_; }

  void dump_buckets(std::ostream& os) const;  // one JSON object per line
  void validate() const;                       // throws on inconsistency

 private:
  static constexpr std::int32_t kNilB = -1;

  struct Bucket {
    std::uint64_t degree = 0;
    NodeId first = kNoNode;
    std::size_t count = 0;
    std::int32_t prev = kNilB;  // toward higher degree
    std::int32_t next = kNilB;  // toward lower degree
  };

  std::int32_t alloc_bucket();
  void free_bucket(std::int32_t b);
  std::int32_t insert_bucket_between(std::uint64_t degree, std::int32_t hi, std::int32_t lo);
  void link_node(std::int32_t b, NodeId u);
  void unlink_node(std::int32_t b, NodeId u);
  void destroy_if_empty(std::int32_t b);

  NodeId n_;
  std::vector<std::uint64_t> deg_;
  std::vector<NodeId> nxt_, prv_;
  std::vector<std::int32_t> bucket_;
  std::vector<Bucket> pool_;
  std::vector<std::int32_t> free_;
  std::int32_t head_ = kNilB;  // highest degree
  std::int32_t tail_ = kNilB;  // lowest nonzero degree
  std::size_t n_buckets_ = 0;
  std::uint64_t mut_ = 0;
};

}  // namespace rivulet
