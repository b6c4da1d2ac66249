#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rivulet/graph.hpp"

namespace rivulet {

enum class OracleMethod { Exact, MonteCarlo, Poll };

const char* oracle_method_name(OracleMethod m);

struct InfluenceEntry {
  NodeId node;
  double influence;
  double stderr_est;
};

// Ground-truth (or estimated) influence per node, dense over 0..n-1.
struct InfluenceTable {
  OracleMethod method = OracleMethod::Exact;
  std::vector<InfluenceEntry> entries;

  double influence(NodeId u) const { return entries.at(u).influence; }
  double stderr_of(NodeId u) const { return entries.at(u).stderr_est; }
  double max_influence() const;
  double kth_influence(std::size_t k) const;  // k-th largest, k >= 1
  // the k most influential nodes, ties by ascending id
  std::vector<NodeId> top_k(std::size_t k) const;

  void write_tsv(const std::string& path) const;
  static InfluenceTable read_tsv(const std::string& path);
};

// Exact influence by enumerating the live-edge space.  LT enumerates the
// product of per-node pick choices, IC the 2^m edge subsets.  Throws
// TooLargeToEnumerate past 1e7 configurations.
InfluenceTable exact_influence(const DynamicGraph& g);

// Forward diffusion simulation from a single seed.  Returns (mean, stderr).
std::pair<double, double> mc_influence_node(const DynamicGraph& g, NodeId u,
                                            std::uint64_t trials, std::uint64_t seed);

// All nodes; per-node sub-streams make the result independent of threads.
InfluenceTable mc_influence(const DynamicGraph& g, std::uint64_t trials,
                            std::uint64_t seed, unsigned threads = 1);

// n * F_R(u) over M fresh reverse-reachable samples of the current graph.
InfluenceTable static_poll_estimate(const DynamicGraph& g, std::uint64_t num_sets,
                                    std::uint64_t seed);

}  // namespace rivulet
