#include "rivulet/degree_buckets.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rivulet {

DegreeBucketList::DegreeBucketList(NodeId n)
    : n_(n), deg_(n, 0), nxt_(n, kNoNode), prv_(n, kNoNode), bucket_(n, kNilB) {}

std::int32_t DegreeBucketList::alloc_bucket() {
  if (!free_.empty()) {
    std::int32_t b = free_.back();
    free_.pop_back();
    return b;
  }
  pool_.push_back({});
  return static_cast<std::int32_t>(pool_.size()) - 1;
}

void DegreeBucketList::free_bucket(std::int32_t b) { free_.push_back(b); }

std::int32_t DegreeBucketList::insert_bucket_between(std::uint64_t degree, std::int32_t hi,
                                                     std::int32_t lo) {
  std::int32_t b = alloc_bucket();
  pool_[b] = {degree, kNoNode, 0, hi, lo};
  mut_ += 4;
  if (hi != kNilB) pool_[hi].next = b; else head_ = b;
  if (lo != kNilB) pool_[lo].prev = b; else tail_ = b;
  mut_ += 2;
  ++n_buckets_;
  return b;
}

void DegreeBucketList::link_node(std::int32_t b, NodeId u) {
  NodeId f = pool_[b].first;
  prv_[u] = kNoNode;
  nxt_[u] = f;
  mut_ += 2;
  if (f != kNoNode) {
    prv_[f] = u;
    ++mut_;
  }
  pool_[b].first = u;
  bucket_[u] = b;
  mut_ += 2;
  ++pool_[b].count;
}

void DegreeBucketList::unlink_node(std::int32_t b, NodeId u) {
  NodeId p = prv_[u], nx = nxt_[u];
  if (p != kNoNode) nxt_[p] = nx; else pool_[b].first = nx;
  ++mut_;
  if (nx != kNoNode) {
    prv_[nx] = p;
    ++mut_;
  }
  --pool_[b].count;
}

void DegreeBucketList::destroy_if_empty(std::int32_t b) {
  if (pool_[b].count != 0) return;
  std::int32_t hi = pool_[b].prev, lo = pool_[b].next;
  if (hi != kNilB) pool_[hi].next = lo; else head_ = lo;
  if (lo != kNilB) pool_[lo].prev = hi; else tail_ = hi;
  mut_ += 2;
  --n_buckets_;
  free_bucket(b);
}

void DegreeBucketList::increment(NodeId u) {
  std::uint64_t d = deg_[u]++;
  if (d == 0) {
    // joins the lowest-degree end; the degree-1 bucket is the tail if present
    std::int32_t b = (tail_ != kNilB && pool_[tail_].degree == 1)
                         ? tail_
                         : insert_bucket_between(1, tail_, kNilB);
    link_node(b, u);
    return;
  }
  std::int32_t b = bucket_[u];
  std::int32_t hi = pool_[b].prev;
  std::int32_t target = (hi != kNilB && pool_[hi].degree == d + 1)
                            ? hi
                            : insert_bucket_between(d + 1, hi, b);
  unlink_node(b, u);
  link_node(target, u);
  destroy_if_empty(b);
}

void DegreeBucketList::decrement(NodeId u) {
  std::uint64_t d = deg_[u];
  if (d == 0) throw std::logic_error("decrement of degree-0 node");
  deg_[u] = d - 1;
  std::int32_t b = bucket_[u];
  if (d - 1 == 0) {
    unlink_node(b, u);
    bucket_[u] = kNilB;
    ++mut_;
    destroy_if_empty(b);
    return;
  }
  std::int32_t lo = pool_[b].next;
  std::int32_t target = (lo != kNilB && pool_[lo].degree == d - 1)
                            ? lo
                            : insert_bucket_between(d - 1, b, lo);
  unlink_node(b, u);
  link_node(target, u);
  destroy_if_empty(b);
}

std::uint64_t DegreeBucketList::max_degree() const {
  return head_ == kNilB ? 0 : pool_[head_].degree;
}

std::uint64_t DegreeBucketList::kth_degree(std::uint64_t k) const {
  std::uint64_t cum = 0;
  for (std::int32_t b = head_; b != kNilB; b = pool_[b].next) {
    cum += pool_[b].count;
    if (k <= cum) return pool_[b].degree;
  }
  return 0;
}

std::vector<NodeId> DegreeBucketList::top_nodes(std::size_t k) const {
  if (k > n_) k = n_;
  std::vector<NodeId> out;
  out.reserve(k);
  std::vector<NodeId> scratch;
  for (std::int32_t b = head_; b != kNilB && out.size() < k; b = pool_[b].next) {
    scratch.clear();
    for (NodeId u = pool_[b].first; u != kNoNode; u = nxt_[u]) scratch.push_back(u);
    std::sort(scratch.begin(), scratch.end());
    for (NodeId u : scratch) {
      if (out.size() == k) break;
      out.push_back(u);
    }
  }
  for (NodeId u = 0; u < n_ && out.size() < k; ++u)
    if (deg_[u] == 0) out.push_back(u);
  return out;
}

std::vector<NodeId> DegreeBucketList::nodes_with_degree_at_least(std::uint64_t cutoff) const {
  std::vector<NodeId> out;
  std::vector<NodeId> scratch;
  for (std::int32_t b = head_; b != kNilB && pool_[b].degree >= cutoff; b = pool_[b].next) {
    scratch.clear();
    for (NodeId u = pool_[b].first; u != kNoNode; u = nxt_[u]) scratch.push_back(u);
    std::sort(scratch.begin(), scratch.end());
    out.insert(out.end(), scratch.begin(), scratch.end());
  }
  if (cutoff == 0)
    for (NodeId u = 0; u < n_; ++u)
      if (deg_[u] == 0) out.push_back(u);
  return out;
}

void DegreeBucketList::dump_buckets(std::ostream& os) const {
  std::vector<NodeId> scratch;
  for (std::int32_t b = head_; b != kNilB; b = pool_[b].next) {
    scratch.clear();
    for (NodeId u = pool_[b].first; u != kNoNode; u = nxt_[u]) scratch.push_back(u);
    std::sort(scratch.begin(), scratch.end());
    os << "{\"degree\":" << pool_[b].degree << ",\"nodes\":[";
    for (std::size_t i = 0; i < scratch.size(); ++i) {
      if (i) os << ',';
      os << scratch[i];
    }
    os << "]}\n";
  }
}

void DegreeBucketList::validate() const {
  auto fail = [](const std::string& why) { throw std::logic_error("DegreeBucketList: " + why); };
  std::size_t seen_buckets = 0, seen_nodes = 0;
  std::uint64_t prev_degree = 0;
  std::int32_t prev_b = kNilB;
  for (std::int32_t b = head_; b != kNilB; b = pool_[b].next) {
    ++seen_buckets;
    if (pool_[b].prev != prev_b) fail("bucket prev link broken");
    if (prev_b != kNilB && pool_[b].degree >= prev_degree) fail("degrees not strictly descending");
    if (pool_[b].count == 0) fail("empty bucket kept");
    std::size_t cnt = 0;
    NodeId prev_u = kNoNode;
    for (NodeId u = pool_[b].first; u != kNoNode; u = nxt_[u]) {
      ++cnt;
      if (cnt > n_) fail("node cycle");
      if (prv_[u] != prev_u) fail("node prev link broken");
      if (bucket_[u] != b) fail("bucket_of mismatch");
      if (deg_[u] != pool_[b].degree) fail("degree mismatch");
      prev_u = u;
    }
    if (cnt != pool_[b].count) fail("count mismatch");
    seen_nodes += cnt;
    prev_degree = pool_[b].degree;
    prev_b = b;
  }
  if (tail_ != prev_b) fail("tail mismatch");
  if (seen_buckets != n_buckets_) fail("bucket count mismatch");
  std::size_t nonzero = 0;
  for (NodeId u = 0; u < n_; ++u) {
    if (deg_[u] > 0) ++nonzero;
    else if (bucket_[u] != kNilB) fail("degree-0 node linked");
  }
  if (nonzero != seen_nodes) fail("nonzero-degree node count mismatch");
}

}  // namespace rivulet
