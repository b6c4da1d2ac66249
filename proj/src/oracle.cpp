#include "rivulet/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "rivulet/rr_collection.hpp"
#include "rivulet/rr_ic.hpp"
#include "rivulet/rr_lt.hpp"

namespace rivulet {

const char* oracle_method_name(OracleMethod m) {
  switch (m) {
    case OracleMethod::Exact: return "EXACT";
    case OracleMethod::MonteCarlo: return "MC";
    case OracleMethod::Poll: return "POLL";
  }
  return "?";
}

double InfluenceTable::max_influence() const {
  double best = 0.0;
  for (const auto& e : entries) best = std::max(best, e.influence);
  return best;
}

double InfluenceTable::kth_influence(std::size_t k) const {
  assert(k >= 1 && k <= entries.size());
  std::vector<double> vals;
  vals.reserve(entries.size());
  for (const auto& e : entries) vals.push_back(e.influence);
  std::nth_element(vals.begin(), vals.begin() + (k - 1), vals.end(), std::greater<>());
  return vals[k - 1];
}

std::vector<NodeId> InfluenceTable::top_k(std::size_t k) const {
  std::vector<NodeId> ids(entries.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
  std::stable_sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    if (entries[a].influence != entries[b].influence)
      return entries[a].influence > entries[b].influence;
    return a < b;
  });
  ids.resize(std::min(k, ids.size()));
  return ids;
}

void InfluenceTable::write_tsv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot open " + path + " for writing");
  os << "# node\tinfluence\tstderr\tmethod\n";
  char buf[64];
  for (const auto& e : entries) {
    os << e.node << '\t';
    auto r1 = std::to_chars(buf, buf + sizeof buf, e.influence);
    os.write(buf, r1.ptr - buf);
    os << '\t';
    auto r2 = std::to_chars(buf, buf + sizeof buf, e.stderr_est);
    os.write(buf, r2.ptr - buf);
    os << '\t' << oracle_method_name(method) << '\n';
  }
}

InfluenceTable InfluenceTable::read_tsv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot open " + path);
  InfluenceTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    InfluenceEntry e;
    std::string method;
    if (!(ls >> e.node >> e.influence >> e.stderr_est >> method))
      throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": bad influence row");
    if (e.node != t.entries.size())
      throw Error(Errc::ParseError,
                  path + ":" + std::to_string(line_no) + ": node ids must be dense and sorted");
    if (method == "EXACT") t.method = OracleMethod::Exact;
    else if (method == "MC") t.method = OracleMethod::MonteCarlo;
    else if (method == "POLL") t.method = OracleMethod::Poll;
    else throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": unknown method " + method);
    t.entries.push_back(e);
  }
  return t;
}

namespace {

constexpr double kEnumCap = 1e7;

InfluenceTable exact_lt(const DynamicGraph& g) {
  const NodeId n = g.num_nodes();
  // per-node pick options (node or self share) with their probabilities
  std::vector<std::vector<std::pair<std::optional<NodeId>, double>>> choices(n);
  double combos = 1.0;
  for (NodeId v = 0; v < n; ++v) {
    double W = g.total_weight(v);
    if (W <= 0.0) {
      choices[v] = {{std::nullopt, 1.0}};
    } else {
      for (const InEdge& e : g.in_neighbors(v))
        if (e.w > 0.0) choices[v].push_back({e.src, e.w / W});
      if (g.self_weight(v) > 0.0) choices[v].push_back({std::nullopt, g.self_weight(v) / W});
    }
    combos *= static_cast<double>(choices[v].size());
    if (combos > kEnumCap)
      throw Error(Errc::TooLargeToEnumerate, "live-edge space exceeds enumeration cap");
  }

  std::vector<double> acc(n, 0.0);
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t token = 0;
  std::vector<std::optional<NodeId>> pick(n);
  for (;;) {
    double prob = 1.0;
    for (NodeId v = 0; v < n; ++v) {
      pick[v] = choices[v][idx[v]].first;
      prob *= choices[v][idx[v]].second;
    }
    if (prob > 0.0) {
      // ancestors of w along its pick chain all reach w
      for (NodeId w = 0; w < n; ++w) {
        ++token;
        NodeId x = w;
        for (;;) {
          if (stamp[x] == token) break;
          stamp[x] = token;
          acc[x] += prob;
          if (!pick[x]) break;
          x = *pick[x];
        }
      }
    }
    // odometer
    NodeId v = 0;
    while (v < n && ++idx[v] == choices[v].size()) idx[v++] = 0;
    if (v == n) break;
  }

  InfluenceTable t;
  t.method = OracleMethod::Exact;
  for (NodeId u = 0; u < n; ++u) t.entries.push_back({u, acc[u], 0.0});
  return t;
}

InfluenceTable exact_ic(const DynamicGraph& g) {
  const NodeId n = g.num_nodes();
  struct E { NodeId u, v; double w; };
  std::vector<E> edges;
  g.for_each_edge([&](NodeId u, NodeId v, double w) { edges.push_back({u, v, w}); });
  if (edges.size() > 23 || std::ldexp(1.0, static_cast<int>(edges.size())) > kEnumCap)
    throw Error(Errc::TooLargeToEnumerate, "edge subset space exceeds enumeration cap");

  std::vector<double> acc(n, 0.0);
  std::vector<std::vector<NodeId>> out(n);
  std::vector<NodeId> q;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t token = 0;
  const std::uint64_t masks = 1ull << edges.size();
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < edges.size(); ++i)
      prob *= (mask >> i & 1) ? edges[i].w : 1.0 - edges[i].w;
    if (prob <= 0.0) continue;
    for (NodeId v = 0; v < n; ++v) out[v].clear();
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (mask >> i & 1) out[edges[i].u].push_back(edges[i].v);
    for (NodeId u = 0; u < n; ++u) {
      ++token;
      q.assign(1, u);
      stamp[u] = token;
      std::size_t reached = 0;
      for (std::size_t qi = 0; qi < q.size(); ++qi) {
        ++reached;
        for (NodeId y : out[q[qi]]) {
          if (stamp[y] == token) continue;
          stamp[y] = token;
          q.push_back(y);
        }
      }
      acc[u] += prob * static_cast<double>(reached);
    }
  }

  InfluenceTable t;
  t.method = OracleMethod::Exact;
  for (NodeId u = 0; u < n; ++u) t.entries.push_back({u, acc[u], 0.0});
  return t;
}

struct OutAdj {
  std::vector<std::vector<std::pair<NodeId, double>>> out;  // (target, prob)
  explicit OutAdj(const DynamicGraph& g) : out(g.num_nodes()) {
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
      double p = g.model() == Model::IC ? w : (g.total_weight(v) > 0.0 ? w / g.total_weight(v) : 0.0);
      if (p > 0.0) out[u].push_back({v, p});
    });
  }
};

// One forward cascade; returns the number of activated nodes.
template <bool IsIC>
std::size_t run_trial(const OutAdj& adj, NodeId seed, Rng& rng, std::vector<NodeId>& q,
                      std::vector<std::uint32_t>& active, std::vector<std::uint32_t>& touched,
                      std::vector<double>& thresh, std::vector<double>& acc,
                      std::uint32_t token) {
  q.assign(1, seed);
  active[seed] = token;
  for (std::size_t qi = 0; qi < q.size(); ++qi) {
    NodeId a = q[qi];
    for (const auto& [b, p] : adj.out[a]) {
      if (active[b] == token) continue;
      if constexpr (IsIC) {
        if (rng.uniform01() < p) {
          active[b] = token;
          q.push_back(b);
        }
      } else {
        if (touched[b] != token) {
          touched[b] = token;
          thresh[b] = rng.uniform01();
          acc[b] = 0.0;
        }
        acc[b] += p;
        if (acc[b] >= thresh[b]) {
          active[b] = token;
          q.push_back(b);
        }
      }
    }
  }
  return q.size();
}

}  // namespace

InfluenceTable exact_influence(const DynamicGraph& g) {
  return g.model() == Model::LT ? exact_lt(g) : exact_ic(g);
}

std::pair<double, double> mc_influence_node(const DynamicGraph& g, NodeId u,
                                            std::uint64_t trials, std::uint64_t seed) {
  OutAdj adj(g);
  Rng rng = Rng(seed).fork(u);
  std::vector<NodeId> q;
  std::vector<std::uint32_t> active(g.num_nodes(), 0), touched(g.num_nodes(), 0);
  std::vector<double> thresh(g.num_nodes(), 0.0), acc(g.num_nodes(), 0.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 1; i <= trials; ++i) {
    std::size_t c = g.model() == Model::IC
                        ? run_trial<true>(adj, u, rng, q, active, touched, thresh, acc,
                                          static_cast<std::uint32_t>(i))
                        : run_trial<false>(adj, u, rng, q, active, touched, thresh, acc,
                                           static_cast<std::uint32_t>(i));
    sum += static_cast<double>(c);
    sum2 += static_cast<double>(c) * static_cast<double>(c);
  }
  double mean = sum / static_cast<double>(trials);
  double var = trials > 1 ? std::max(0.0, (sum2 - static_cast<double>(trials) * mean * mean) /
                                              static_cast<double>(trials - 1))
                          : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(trials))};
}

InfluenceTable mc_influence(const DynamicGraph& g, std::uint64_t trials, std::uint64_t seed,
                            unsigned threads) {
  const NodeId n = g.num_nodes();
  InfluenceTable t;
  t.method = OracleMethod::MonteCarlo;
  t.entries.resize(n);
  OutAdj adj(g);

  auto work = [&](NodeId lo, NodeId hi) {
    std::vector<NodeId> q;
    std::vector<std::uint32_t> active(n, 0), touched(n, 0);
    std::vector<double> thresh(n, 0.0), acc(n, 0.0);
    for (NodeId u = lo; u < hi; ++u) {
      Rng rng = Rng(seed).fork(u);
      double sum = 0.0, sum2 = 0.0;
      std::uint32_t token = 0;
      std::fill(active.begin(), active.end(), 0);
      std::fill(touched.begin(), touched.end(), 0);
      for (std::uint64_t i = 0; i < trials; ++i) {
        if (++token == 0) {  // stamp wraparound
          std::fill(active.begin(), active.end(), 0);
          std::fill(touched.begin(), touched.end(), 0);
          token = 1;
        }
        std::size_t c = g.model() == Model::IC
                            ? run_trial<true>(adj, u, rng, q, active, touched, thresh, acc, token)
                            : run_trial<false>(adj, u, rng, q, active, touched, thresh, acc, token);
        sum += static_cast<double>(c);
        sum2 += static_cast<double>(c) * static_cast<double>(c);
      }
      double mean = sum / static_cast<double>(trials);
      double var = trials > 1 ? std::max(0.0, (sum2 - static_cast<double>(trials) * mean * mean) /
                                                  static_cast<double>(trials - 1))
                              : 0.0;
      t.entries[u] = {u, mean, std::sqrt(var / static_cast<double>(trials))};
    }
  };

  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    NodeId chunk = (n + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
      NodeId lo = std::min<NodeId>(n, i * chunk), hi = std::min<NodeId>(n, (i + 1) * chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return t;
}

InfluenceTable static_poll_estimate(const DynamicGraph& g, std::uint64_t num_sets,
                                    std::uint64_t seed) {
  std::unique_ptr<RrCollectionBase> coll = make_collection(&g, Rng(seed));
  for (std::uint64_t i = 0; i < num_sets; ++i) coll->add_fresh();
  const double n = static_cast<double>(g.num_nodes());
  const double M = static_cast<double>(num_sets);
  InfluenceTable t;
  t.method = OracleMethod::Poll;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    double f = static_cast<double>(coll->index().degree(u)) / M;
    t.entries.push_back({u, n * f, n * std::sqrt(f * (1.0 - f) / M)});
  }
  return t;
}

}  // namespace rivulet
