#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rivulet/errors.hpp"
#include "rivulet/oracle.hpp"
#include "rivulet/rr_lt.hpp"
#include "support/stats.hpp"
#include "support/testutil.hpp"

using namespace rivulet;
using testutil::make_graph;

namespace {

// recorded pick of v inside a path set: next path node, or prev_of_last for
// the terminal node; nullopt = self share
std::optional<NodeId> pick_of(const RRSetLT& s, NodeId v) {
  for (std::size_t i = 0; i < s.path.size(); ++i)
    if (s.path[i] == v) return i + 1 < s.path.size() ? std::optional<NodeId>(s.path[i + 1])
                                                     : s.prev_of_last;
  FAIL("pick_of: node not on path");
  return std::nullopt;
}

std::string shape_of(const RRSetLT& s) {
  std::string out;
  for (NodeId u : s.path) out += std::to_string(u) + ">";
  out += s.prev_of_last ? std::to_string(*s.prev_of_last) : std::string("S");
  return out;
}

UpdateDelta apply(DynamicGraph& g, LtCollection& c, NodeId u, NodeId v, bool inc, double d) {
  UpdateDelta del = g.apply_update({0, u, v, inc, d});
  c.apply_delta(del);
  return del;
}

}  // namespace

TEST_CASE("lt generate: isolated node gives a singleton self-terminated path") {
  DynamicGraph g(1, Model::LT);
  LtCollection c(&g, Rng(1));
  SetId id = c.add_fresh();
  const RRSetLT& s = c.set(id);
  CHECK(s.path == std::vector<NodeId>{0});
  CHECK_FALSE(s.prev_of_last.has_value());
  c.check_consistency();
}

TEST_CASE("lt generate: two-node poll probabilities and uniform starts") {
  // a=0 -> b=1 with weight 1; both self-weights 1.  P(path=[b,a]) = 1/2 * 1/2.
  DynamicGraph g = make_graph(2, Model::LT, {{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}});
  LtCollection c(&g, Rng(2));
  const int kSets = 100000;
  int ba = 0, start_b = 0;
  for (int i = 0; i < kSets; ++i) {
    const RRSetLT& s = c.set(c.add_fresh());
    if (s.path[0] == 1) ++start_b;
    if (s.path == std::vector<NodeId>{1, 0}) ++ba;
  }
  CHECK(std::abs(ba / double(kSets) - 0.25) < 0.005);        // 3.5 sigma ~ 0.0048
  CHECK(std::abs(start_b / double(kSets) - 0.5) < 0.006);
  c.check_consistency();
}

TEST_CASE("lt generate: mean path length tracks mean influence") {
  DynamicGraph g = testutil::load_micro({"path5_lt", Model::LT});
  InfluenceTable exact = exact_influence(g);
  double ibar = 0.0;
  for (const auto& e : exact.entries) ibar += e.influence;
  ibar /= double(exact.entries.size());

  LtCollection c(&g, Rng(3));
  const int kSets = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < kSets; ++i) {
    double len = double(c.set(c.add_fresh()).path.size());
    sum += len;
    sumsq += len * len;
  }
  double mean = sum / kSets;
  double se = std::sqrt((sumsq / kSets - mean * mean) / kSets);
  CHECK(std::abs(mean - ibar) <= 3.0 * se);
}

TEST_CASE("lt increase: brand-new dominating edge reroutes every set") {
  DynamicGraph g(2, Model::LT);  // no edges at all: paths are singletons
  LtCollection c(&g, Rng(4));
  for (int i = 0; i < 200; ++i) c.add_fresh();
  std::uint64_t d1 = c.index().degree(1);
  CHECK(d1 > 0);
  apply(g, c, 0, 1, true, 1.0);  // p = delta / W_after = 1
  c.check_consistency();
  for (const auto& [id, s] : c.sets()) {
    if (std::find(s.path.begin(), s.path.end(), NodeId{1}) == s.path.end()) continue;
    CHECK(pick_of(s, 1) == std::optional<NodeId>(0));  // rerouted with certainty
    CHECK(std::find(s.path.begin(), s.path.end(), NodeId{0}) != s.path.end());
  }
  CHECK(c.index().degree(1) == d1);  // membership of v itself untouched
}

TEST_CASE("lt increase: rerouting probability equals new weight share") {
  // v=2 starts with one in-edge (0,2,w=1) and self-weight 1
  DynamicGraph g = make_graph(3, Model::LT, {{0, 2, 1.0}, {2, 2, 1.0}});
  LtCollection c(&g, Rng(5));
  const int kSets = 40000;
  for (int i = 0; i < kSets; ++i) c.add_fresh();
  apply(g, c, 1, 2, true, 2.0);  // W: 2 -> 4; marginals now {1: 0.5, 0: 0.25, self: 0.25}
  c.check_consistency();
  std::uint64_t n1 = 0, n0 = 0, ns = 0, m = 0;
  for (const auto& [id, s] : c.sets()) {
    if (std::find(s.path.begin(), s.path.end(), NodeId{2}) == s.path.end()) continue;
    ++m;
    auto p = pick_of(s, 2);
    if (!p) ++ns;
    else if (*p == 1) ++n1;
    else ++n0;
  }
  CHECK(m > 12000);  // F(2) == 1/3 by construction
  auto tol = [&](double p) { return 3.5 * std::sqrt(p * (1 - p) / double(m)); };
  CHECK(std::abs(n1 / double(m) - 0.5) < tol(0.5));
  CHECK(std::abs(n0 / double(m) - 0.25) < tol(0.25));
  CHECK(std::abs(ns / double(m) - 0.25) < tol(0.25));
}

TEST_CASE("lt increase: pick target already on the path closes a cycle") {
  // deterministic 2-cycle: every pick is forced
  DynamicGraph g = make_graph(2, Model::LT, {{0, 1, 1.0}, {1, 0, 1.0}});
  LtCollection c(&g, Rng(6));
  for (int i = 0; i < 100; ++i) c.add_fresh();
  auto before = c.sets();
  apply(g, c, 0, 1, true, 3.0);  // reroute target 0 is always already on the path
  c.check_consistency();
  REQUIRE(c.sets().size() == before.size());
  for (const auto& [id, s] : c.sets()) {
    CHECK(s.path == before.at(id).path);
    CHECK(s.prev_of_last == before.at(id).prev_of_last);
    CHECK(s.prev_of_last == std::optional<NodeId>(s.path[0]));  // cycle closed
  }
}

TEST_CASE("lt decrease: full edge deletion reroutes every candidate") {
  DynamicGraph g = make_graph(3, Model::LT, {{0, 2, 1.0}, {1, 2, 1.0}, {2, 2, 2.0}});
  LtCollection c(&g, Rng(7));
  for (int i = 0; i < 5000; ++i) c.add_fresh();
  apply(g, c, 1, 2, false, 1.0);  // delta == w_before: certain reroute
  c.check_consistency();
  for (const auto& [id, s] : c.sets()) {
    if (std::find(s.path.begin(), s.path.end(), NodeId{2}) == s.path.end()) continue;
    CHECK(pick_of(s, 2) != std::optional<NodeId>(1));  // edge no longer exists
  }
}

TEST_CASE("lt decrease: survivors re-pick from the post-update distribution") {
  // v=2: in-edges w(0->2)=1, w(1->2)=3, no self share
  DynamicGraph g = make_graph(3, Model::LT, {{0, 2, 1.0}, {1, 2, 3.0}});
  LtCollection c(&g, Rng(8));
  const int kSets = 40000;
  for (int i = 0; i < kSets; ++i) c.add_fresh();
  apply(g, c, 1, 2, false, 2.0);  // w: 3 -> 1, W: 4 -> 2; new marginals 0.5 / 0.5
  c.check_consistency();
  std::uint64_t n1 = 0, n0 = 0, m = 0;
  for (const auto& [id, s] : c.sets()) {
    if (std::find(s.path.begin(), s.path.end(), NodeId{2}) == s.path.end()) continue;
    ++m;
    auto p = pick_of(s, 2);
    REQUIRE(p.has_value());
    (*p == 1 ? n1 : n0) += 1;
  }
  // a wrong reroute rule would sit at 0.5625 (delta/W_before), 0.625 (stale
  // re-pick dist) or 0.375 (certain reroute); 3.5 sigma ~ 0.015 separates them
  double tol = 3.5 * std::sqrt(0.25 / double(m));
  CHECK(std::abs(n1 / double(m) - 0.5) < tol);
  CHECK(std::abs(n0 / double(m) - 0.5) < tol);
}

TEST_CASE("lt decrease: no candidates means nothing is touched") {
  // picks of node 1 under seed 9 never land on the tiny edge from node 2
  DynamicGraph g = make_graph(3, Model::LT, {{0, 1, 1000.0}, {2, 1, 0.001}});
  LtCollection c(&g, Rng(9));
  for (int i = 0; i < 200; ++i) c.add_fresh();
  for (const auto& [id, s] : c.sets()) {  // establish the precondition
    if (std::find(s.path.begin(), s.path.end(), NodeId{1}) == s.path.end()) continue;
    REQUIRE(pick_of(s, 1) != std::optional<NodeId>(2));
  }
  auto before = c.sets();
  c.reset_stats();
  apply(g, c, 2, 1, false, 0.0005);
  CHECK(c.stats().updated == 0);
  for (const auto& [id, s] : c.sets()) {
    CHECK(s.path == before.at(id).path);
    CHECK(s.prev_of_last == before.at(id).prev_of_last);
  }
  c.check_consistency();
}

TEST_CASE("lt maintenance: touched sets per update concentrate at M*I_v/n") {
  DynamicGraph g = testutil::load_micro({"path5_lt", Model::LT});
  double i3 = exact_influence(g).influence(3);  // 1.8
  CHECK(i3 == doctest::Approx(1.8));
  LtCollection c(&g, Rng(10));
  const int kSets = 5000;
  for (int i = 0; i < kSets; ++i) c.add_fresh();
  c.reset_stats();
  apply(g, c, 2, 3, true, 0.25);  // retrieves exactly the sets containing v=3
  double p = i3 / 5.0;
  double expect = kSets * p, sigma = std::sqrt(kSets * p * (1 - p));
  CHECK(std::abs(double(c.stats().retrieved) - expect) <= 3.0 * sigma);
}

TEST_CASE("lt maintenance: distribution equals fresh generation on the final graph") {
  DynamicGraph g = make_graph(3, Model::LT, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 1, 0.5}, {2, 2, 0.5}});
  LtCollection maintained(&g, Rng(11));
  const int kSets = 20000;
  for (int i = 0; i < kSets; ++i) maintained.add_fresh();
  // a churny little stream ending away from the start graph
  apply(g, maintained, 2, 0, true, 0.75);
  apply(g, maintained, 0, 1, false, 0.5);
  apply(g, maintained, 2, 1, true, 1.5);
  apply(g, maintained, 1, 2, false, 1.0);
  apply(g, maintained, 0, 2, true, 2.0);
  maintained.check_consistency();

  DynamicGraph fresh_g = make_graph(3, Model::LT, {{0, 1, 0.5}, {1, 1, 0.5}, {2, 2, 0.5},
                                                   {2, 0, 0.75}, {2, 1, 1.5}, {0, 2, 2.0}});
  LtCollection fresh(&fresh_g, Rng(12));
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> hist;
  for (const auto& [id, s] : maintained.sets()) hist[shape_of(s)].first++;
  for (int i = 0; i < kSets; ++i) hist[shape_of(fresh.set(fresh.add_fresh()))].second++;
  std::vector<std::uint64_t> a, b;
  for (const auto& [shape, counts] : hist) {
    a.push_back(counts.first);
    b.push_back(counts.second);
  }
  CHECK(teststat::chisq_homogeneity_pvalue(a, b) > 0.001);
}

TEST_CASE("lt unbiasedness: maintained estimates match exact influence") {
  // small-scale version of the estimator check: many independent collections
  DynamicGraph g0 = testutil::load_micro({"trichord_lt", Model::LT});
  const int kTrackers = 2000, kM = 30;
  const NodeId n = g0.num_nodes();
  std::vector<std::vector<double>> est(n);
  for (int t = 0; t < kTrackers; ++t) {
    DynamicGraph g = g0;
    LtCollection c(&g, Rng(100 + t));
    for (int i = 0; i < kM; ++i) c.add_fresh();
    apply(g, c, 0, 1, false, 0.5);
    apply(g, c, 2, 1, true, 1.0);
    apply(g, c, 0, 2, true, 0.5);
    apply(g, c, 2, 3, false, 0.5);
    for (NodeId u = 0; u < n; ++u)
      est[u].push_back(double(n) * double(c.index().degree(u)) / kM);
  }
  DynamicGraph gf = g0;
  gf.apply_update({1, 0, 1, false, 0.5});
  gf.apply_update({2, 2, 1, true, 1.0});
  gf.apply_update({3, 0, 2, true, 0.5});
  gf.apply_update({4, 2, 3, false, 0.5});
  InfluenceTable exact = exact_influence(gf);
  for (NodeId u = 0; u < n; ++u) {
    double mean = 0.0;
    for (double x : est[u]) mean += x;
    mean /= est[u].size();
    double var = 0.0;
    for (double x : est[u]) var += (x - mean) * (x - mean);
    double se = std::sqrt(var / (est[u].size() - 1) / est[u].size());
    CHECK(std::abs(mean - exact.influence(u)) <= 3.0 * std::max(se, 1e-12));
  }
}

TEST_CASE("lt collection: remove_last and restore round-trip") {
  DynamicGraph g = testutil::load_micro({"star5_lt", Model::LT});
  LtCollection c(&g, Rng(13));
  for (int i = 0; i < 50; ++i) c.add_fresh();
  std::vector<std::uint64_t> deg;
  for (NodeId u = 0; u < 5; ++u) deg.push_back(c.index().degree(u));

  SetId victim = c.remove_last();
  CHECK(c.size() == 49);
  CHECK_FALSE(c.index().contains_set(victim));
  c.restore_last_removed();
  CHECK(c.size() == 50);
  for (NodeId u = 0; u < 5; ++u) CHECK(c.index().degree(u) == deg[u]);
  c.check_consistency();

  LtCollection empty(&g, Rng(14));
  try {
    empty.remove_last();
    FAIL("remove_last on empty accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyCollection);
  }
}

TEST_CASE("lt fuzz: invariants hold through a random update stream") {
  DynamicGraph g(8, Model::LT);
  Rng r(15);
  std::uint64_t t = 0;
  for (int i = 0; i < 30; ++i)
    g.apply_update({++t, NodeId(r.below(8)), NodeId(r.below(8)), true, 0.25 + r.uniform01()});
  LtCollection c(&g, Rng(16));
  for (int i = 0; i < 64; ++i) c.add_fresh();
  for (int step = 0; step < 400; ++step) {
    NodeId u = NodeId(r.below(8)), v = NodeId(r.below(8));
    double w = g.edge_weight(u, v);
    if (u == v) w = g.self_weight(u);
    UpdateDelta d;
    if (w > 0 && r.uniform01() < 0.45) {
      d = g.apply_update({++t, u, v, false, r.uniform01() < 0.3 ? w : w * r.uniform01()});
    } else {
      d = g.apply_update({++t, u, v, true, 0.1 + r.uniform01()});
    }
    c.apply_delta(d);
    if (step % 20 == 0) c.check_consistency();
  }
  c.check_consistency();
}
