#include "rivulet/rr_lt.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_set>

namespace rivulet {

const RRSetLT& LtCollection::set(SetId id) const {
  auto it = sets_.find(id);
  if (it == sets_.end()) throw Error(Errc::UnknownSetId, "set " + std::to_string(id));
  return it->second;
}

// Keep drawing picks for the current last node until one lands on the path
// (cycle), on the self share, or extends the walk.
void LtCollection::extend_from_last(RRSetLT& s) {
  std::unordered_set<NodeId> on_path(s.path.begin(), s.path.end());
  for (;;) {
    NodeId last = s.path.back();
    std::optional<NodeId> pick = g_->sample_previous_node_lt(last, rng_);
    if (!pick) {
      s.prev_of_last = std::nullopt;
      return;
    }
    if (on_path.count(*pick)) {
      s.prev_of_last = *pick;
      return;
    }
    s.path.push_back(*pick);
    on_path.insert(*pick);
  }
}

SetId LtCollection::add_fresh() {
  RRSetLT s;
  s.path.push_back(static_cast<NodeId>(rng_.below(g_->num_nodes())));
  extend_from_last(s);
  SetId id = next_id_++;
  index_.register_set(id, s.path);
  member_entries_ += s.path.size();
  ++stats_.generated;
  sets_.emplace(id, std::move(s));
  return id;
}

SetId LtCollection::remove_last() {
  if (sets_.empty()) throw Error(Errc::EmptyCollection, "remove_last on empty collection");
  auto it = std::prev(sets_.end());
  SetId id = it->first;
  index_.unregister_set(id, it->second.path);
  member_entries_ -= it->second.path.size();
  stash_.emplace(id, std::move(it->second));
  sets_.erase(it);
  return id;
}

void LtCollection::restore_last_removed() {
  if (!stash_) throw std::logic_error("no stashed set to restore");
  auto [id, s] = std::move(*stash_);
  stash_.reset();
  index_.register_set(id, s.path);
  member_entries_ += s.path.size();
  sets_.emplace(id, std::move(s));
}

void LtCollection::apply_delta(const UpdateDelta& d) {
  if (d.increase) handle_increase(d);
  else handle_decrease(d);
}

void LtCollection::commit_path_change(SetId id, RRSetLT& s, std::vector<NodeId> old_path_nodes) {
  std::unordered_set<NodeId> now(s.path.begin(), s.path.end());
  std::unordered_set<NodeId> before(old_path_nodes.begin(), old_path_nodes.end());
  std::vector<NodeId> removed, added;
  for (NodeId u : old_path_nodes)
    if (!now.count(u)) removed.push_back(u);
  for (NodeId u : s.path)
    if (!before.count(u)) added.push_back(u);
  std::sort(removed.begin(), removed.end());
  std::sort(added.begin(), added.end());
  if (!removed.empty() || !added.empty()) index_.diff_membership(id, removed, added);
  member_entries_ += s.path.size();
  member_entries_ -= old_path_nodes.size();
}

// Weight of (u,v) grew by delta.  Each set through v reroutes v's pick to u
// with probability delta/W_v(now); the tail beyond v is discarded and the walk
// resumes from the new pick.  That keeps every pick marginal at w/W under the
// new weights.
void LtCollection::handle_increase(const UpdateDelta& d) {
  if (d.W_after <= 0.0) return;
  double p = d.delta / d.W_after;
  std::optional<NodeId> target =
      d.self ? std::nullopt : std::optional<NodeId>(d.u);
  for (SetId id : index_.sets_containing_sorted(d.v)) {
    ++stats_.retrieved;
    if (rng_.uniform01() >= p) continue;
    ++stats_.updated;
    RRSetLT& s = sets_.at(id);
    std::vector<NodeId> old_nodes = s.path;
    std::size_t pos = 0;
    while (s.path[pos] != d.v) ++pos;
    s.path.resize(pos + 1);
    if (!target) {
      s.prev_of_last = std::nullopt;
    } else if (std::find(s.path.begin(), s.path.end(), *target) != s.path.end()) {
      s.prev_of_last = *target;
    } else {
      s.path.push_back(*target);
      extend_from_last(s);
    }
    commit_path_change(id, s, std::move(old_nodes));
  }
}

// Weight of (u,v) shrank.  Only sets where v actually picked u are candidates;
// each reroutes with probability delta/w_uv(before), drawing a replacement
// pick from the post-update distribution.
void LtCollection::handle_decrease(const UpdateDelta& d) {
  if (d.w_before <= 0.0) return;
  double p = d.delta / d.w_before;
  std::optional<NodeId> expected =
      d.self ? std::nullopt : std::optional<NodeId>(d.u);
  for (SetId id : index_.sets_containing_sorted(d.v)) {
    ++stats_.retrieved;
    RRSetLT& s = sets_.at(id);
    std::size_t pos = 0;
    while (s.path[pos] != d.v) ++pos;
    std::optional<NodeId> pick = pos + 1 < s.path.size()
                                     ? std::optional<NodeId>(s.path[pos + 1])
                                     : s.prev_of_last;
    if (pick != expected) continue;
    if (rng_.uniform01() >= p) continue;
    ++stats_.updated;
    std::vector<NodeId> old_nodes = s.path;
    s.path.resize(pos + 1);
    extend_from_last(s);
    commit_path_change(id, s, std::move(old_nodes));
  }
}

void LtCollection::check_consistency() const {
  auto fail = [](const std::string& why) { throw std::logic_error("LtCollection: " + why); };
  std::vector<std::uint64_t> deg(g_->num_nodes(), 0);
  std::uint64_t entries = 0;
  for (const auto& [id, s] : sets_) {
    if (s.path.empty()) fail("empty path");
    std::unordered_set<NodeId> seen;
    for (NodeId u : s.path)
      if (!seen.insert(u).second) fail("path not simple");
    for (std::size_t i = 0; i + 1 < s.path.size(); ++i)
      if (g_->edge_weight(s.path[i + 1], s.path[i]) <= 0.0)
        fail("path edge missing from graph");
    NodeId last = s.path.back();
    if (s.prev_of_last) {
      if (!seen.count(*s.prev_of_last)) fail("prev_of_last not on path");
      if (g_->edge_weight(*s.prev_of_last, last) <= 0.0) fail("prev_of_last edge missing");
    } else {
      if (g_->self_weight(last) <= 0.0 && g_->total_weight(last) > 0.0)
        fail("self pick without self share");
    }
    for (NodeId u : s.path) {
      ++deg[u];
      if (!index_.sets_containing(u).count(id)) fail("inverted index missing membership");
    }
    entries += s.path.size();
    if (!index_.contains_set(id)) fail("set unknown to index");
  }
  if (index_.size() != sets_.size()) fail("set count mismatch");
  if (entries != member_entries_) fail("member entry count drift");
  for (NodeId u = 0; u < g_->num_nodes(); ++u) {
    if (index_.degree(u) != deg[u]) fail("ranking degree mismatch");
    if (index_.sets_containing(u).size() != deg[u]) fail("inverted list size mismatch");
  }
}

}  // namespace rivulet
