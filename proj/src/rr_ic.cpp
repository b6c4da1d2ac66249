#include "rivulet/rr_ic.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_set>

namespace rivulet {

std::vector<NodeId> RRSetIC::members_sorted() const {
  std::vector<NodeId> out;
  out.reserve(live_in.size());
  for (const auto& [u, _] : live_in) out.push_back(u);
  std::sort(out.begin(), out.end());
  return out;
}

const RRSetIC& IcCollection::set(SetId id) const {
  auto it = sets_.find(id);
  if (it == sets_.end()) throw Error(Errc::UnknownSetId, "set " + std::to_string(id));
  return it->second;
}

// Reverse BFS from seed.  Every in-edge of a node is sampled exactly when that
// node is dequeued, so each graph edge is decided at most once per set.
std::vector<NodeId> IcCollection::expand(RRSetIC& s, NodeId seed) {
  std::vector<NodeId> order{seed};
  s.live_in.emplace(seed, std::vector<LiveEdge>{});
  std::vector<LiveEdge> buf;
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    NodeId x = order[qi];
    buf.clear();
    for (const InEdge& e : g_->in_neighbors(x)) {
      if (rng_.uniform01() >= e.w) continue;
      bool fresh = !s.contains(e.src);
      buf.push_back({e.src, fresh});
      if (fresh) {
        s.live_in.emplace(e.src, std::vector<LiveEdge>{});
        order.push_back(e.src);
      }
    }
    auto& ev = s.live_in.at(x);
    ev.insert(ev.end(), buf.begin(), buf.end());
  }
  return order;
}

SetId IcCollection::add_fresh() {
  RRSetIC s;
  s.start = static_cast<NodeId>(rng_.below(g_->num_nodes()));
  expand(s, s.start);
  SetId id = next_id_++;
  std::vector<NodeId> members = s.members_sorted();
  index_.register_set(id, members);
  member_entries_ += members.size();
  ++stats_.generated;
  sets_.emplace(id, std::move(s));
  return id;
}

SetId IcCollection::remove_last() {
  if (sets_.empty()) throw Error(Errc::EmptyCollection, "remove_last on empty collection");
  auto it = std::prev(sets_.end());
  SetId id = it->first;
  std::vector<NodeId> members = it->second.members_sorted();
  index_.unregister_set(id, members);
  member_entries_ -= members.size();
  stash_.emplace(id, std::move(it->second));
  sets_.erase(it);
  return id;
}

void IcCollection::restore_last_removed() {
  if (!stash_) throw std::logic_error("no stashed set to restore");
  auto [id, s] = std::move(*stash_);
  stash_.reset();
  std::vector<NodeId> members = s.members_sorted();
  index_.register_set(id, members);
  member_entries_ += members.size();
  sets_.emplace(id, std::move(s));
}

void IcCollection::apply_delta(const UpdateDelta& d) {
  if (d.increase) handle_increase(d);
  else handle_decrease(d);
}

// Weight of (u,v) grew by delta.  In sets through v where (u,v) is dead, flip
// it live with probability delta/(1-w_before); that lifts the live marginal to
// w_after.  If u was outside the set it joins (bfs label) and its own reverse
// cone is sampled fresh; otherwise the edge is a cross link and membership is
// unchanged.
void IcCollection::handle_increase(const UpdateDelta& d) {
  double denom = 1.0 - d.w_before;
  if (denom <= 0.0) return;
  double p = d.delta / denom;
  for (SetId id : index_.sets_containing_sorted(d.v)) {
    ++stats_.retrieved;
    RRSetIC& s = sets_.at(id);
    auto& ev = s.live_in.at(d.v);
    bool live = std::any_of(ev.begin(), ev.end(),
                            [&](const LiveEdge& le) { return le.src == d.u; });
    if (live) continue;
    if (rng_.uniform01() >= p) continue;
    ++stats_.updated;
    bool u_member = s.contains(d.u);
    ev.push_back({d.u, !u_member});
    if (!u_member) {
      std::vector<NodeId> added = expand(s, d.u);
      std::sort(added.begin(), added.end());
      index_.diff_membership(id, {}, added);
      member_entries_ += added.size();
    }
  }
}

// Weight of (u,v) shrank.  Sets where (u,v) is live drop it with probability
// delta/w_before.  Dropping a cross edge is free; dropping a bfs edge forces a
// fresh traversal from the start over the remaining live edges, keeping
// exactly what is still reachable and relabeling it.
void IcCollection::handle_decrease(const UpdateDelta& d) {
  if (d.w_before <= 0.0) return;
  double p = d.delta / d.w_before;
  for (SetId id : index_.sets_containing_sorted(d.v)) {
    ++stats_.retrieved;
    RRSetIC& s = sets_.at(id);
    auto& ev = s.live_in.at(d.v);
    auto it = std::find_if(ev.begin(), ev.end(),
                           [&](const LiveEdge& le) { return le.src == d.u; });
    if (it == ev.end()) continue;
    if (rng_.uniform01() >= p) continue;
    ++stats_.updated;
    bool was_bfs = it->bfs;
    ev.erase(it);
    if (!was_bfs) continue;
    ++stats_.traversals;

    std::unordered_map<NodeId, std::vector<LiveEdge>> fresh;
    std::vector<NodeId> order{s.start};
    fresh.emplace(s.start, std::vector<LiveEdge>{});
    std::vector<LiveEdge> buf;
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      NodeId x = order[qi];
      buf.clear();
      for (const LiveEdge& le : s.live_in.at(x)) {
        bool first = !fresh.count(le.src);
        buf.push_back({le.src, first});
        if (first) {
          fresh.emplace(le.src, std::vector<LiveEdge>{});
          order.push_back(le.src);
        }
      }
      fresh.at(x) = buf;
    }
    std::vector<NodeId> removed;
    for (const auto& [u, _] : s.live_in)
      if (!fresh.count(u)) removed.push_back(u);
    std::sort(removed.begin(), removed.end());
    s.live_in = std::move(fresh);
    if (!removed.empty()) {
      index_.diff_membership(id, removed, {});
      member_entries_ -= removed.size();
    }
  }
}

void IcCollection::check_consistency() const {
  auto fail = [](const std::string& why) { throw std::logic_error("IcCollection: " + why); };
  std::vector<std::uint64_t> deg(g_->num_nodes(), 0);
  std::uint64_t entries = 0;
  for (const auto& [id, s] : sets_) {
    if (!s.contains(s.start)) fail("start not a member");
    std::size_t bfs_into = 0;
    std::unordered_map<NodeId, NodeId> parent;  // src of a bfs edge -> its key
    for (const auto& [x, ev] : s.live_in) {
      std::unordered_set<NodeId> srcs;
      for (const LiveEdge& le : ev) {
        if (!srcs.insert(le.src).second) fail("duplicate live edge");
        if (!s.contains(le.src)) fail("live edge from non-member");
        if (g_->edge_weight(le.src, x) <= 0.0) fail("live edge missing from graph");
        if (le.bfs) {
          ++bfs_into;
          if (!parent.emplace(le.src, x).second) fail("node discovered twice");
        }
      }
    }
    if (bfs_into != s.live_in.size() - 1) fail("bfs edge count != members - 1");
    if (parent.count(s.start)) fail("start has a bfs parent");
    for (const auto& [u, _] : s.live_in) {
      if (u == s.start) continue;
      // parent chain must reach the start without cycling
      NodeId x = u;
      std::size_t hops = 0;
      while (x != s.start) {
        auto itp = parent.find(x);
        if (itp == parent.end()) fail("member without bfs parent");
        x = itp->second;
        if (++hops > s.live_in.size()) fail("bfs parent cycle");
      }
    }
    for (const auto& [u, _] : s.live_in) {
      ++deg[u];
      if (!index_.sets_containing(u).count(id)) fail("inverted index missing membership");
    }
    entries += s.live_in.size();
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
