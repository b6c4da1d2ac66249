#include "rivulet/rr_index.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace rivulet {

RRIndex::RRIndex(NodeId n) : containing_(n), ranking_(n) {}

void RRIndex::check_known(SetId id) const {
  if (!ids_.count(id)) throw Error(Errc::UnknownSetId, "set " + std::to_string(id) + " not registered");
}

void RRIndex::register_set(SetId id, std::span<const NodeId> members) {
  if (!ids_.insert(id).second)
    throw Error(Errc::DuplicateSetId, "set " + std::to_string(id) + " already registered");
  ++m_;
  for (NodeId u : members) {
    bool fresh = containing_[u].insert(id).second;
    assert(fresh);
    (void)fresh;
    ranking_.increment(u);
  }
}

void RRIndex::unregister_set(SetId id, std::span<const NodeId> members) {
  check_known(id);
  ids_.erase(id);
  --m_;
  for (NodeId u : members) {
    std::size_t erased = containing_[u].erase(id);
    assert(erased == 1);
    (void)erased;
    ranking_.decrement(u);
  }
}

void RRIndex::diff_membership(SetId id, std::span<const NodeId> removed,
                              std::span<const NodeId> added) {
  check_known(id);
  for (NodeId u : removed) {
    std::size_t erased = containing_[u].erase(id);
    assert(erased == 1);
    (void)erased;
    ranking_.decrement(u);
  }
  for (NodeId u : added) {
    bool fresh = containing_[u].insert(id).second;
    assert(fresh);
    (void)fresh;
    ranking_.increment(u);
  }
}

std::uint64_t RRIndex::degree(NodeId u) const { return ranking_.degree(u); }

double RRIndex::fraction(NodeId u) const {
  if (m_ == 0) throw Error(Errc::EmptyCollection, "no sets registered");
  return static_cast<double>(ranking_.degree(u)) / static_cast<double>(m_);
}

double RRIndex::max_fraction() const {
  if (m_ == 0) throw Error(Errc::EmptyCollection, "no sets registered");
  return static_cast<double>(ranking_.max_degree()) / static_cast<double>(m_);
}

double RRIndex::kth_fraction(std::uint64_t k) const {
  if (m_ == 0) throw Error(Errc::EmptyCollection, "no sets registered");
  return static_cast<double>(ranking_.kth_degree(k)) / static_cast<double>(m_);
}

std::vector<std::pair<NodeId, double>> RRIndex::top_fraction(std::size_t k) const {
  if (m_ == 0) throw Error(Errc::EmptyCollection, "no sets registered");
  std::vector<std::pair<NodeId, double>> out;
  for (NodeId u : ranking_.top_nodes(k))
    out.emplace_back(u, static_cast<double>(ranking_.degree(u)) / static_cast<double>(m_));
  return out;
}

std::vector<NodeId> RRIndex::nodes_with_degree_at_least(std::uint64_t cutoff) const {
  return ranking_.nodes_with_degree_at_least(cutoff);
}

std::vector<SetId> RRIndex::sets_containing_sorted(NodeId u) const {
  std::vector<SetId> ids(containing_[u].begin(), containing_[u].end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

const std::unordered_set<SetId>& RRIndex::sets_containing(NodeId u) const {
  return containing_[u];
}

}  // namespace rivulet
