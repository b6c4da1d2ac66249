#pragma once

#include <string>
#include <vector>

#include "rivulet/graph.hpp"
#include "rivulet/types.hpp"

namespace rivulet {

// Graph parsed from TSV (u, v, weight per line; u == v rows are LT
// self-weights, '#' starts a comment).  When ids are not already dense
// non-negative integers they are densified in first-appearance order and
// names holds dense id -> original token; otherwise names is empty.
struct ParsedGraph {
  DynamicGraph graph;
  std::vector<std::string> names;
};

ParsedGraph parse_graph_tsv(const std::string& path, Model model);
void write_graph_tsv(const DynamicGraph& g, const std::string& path);
void write_dictionary_tsv(const std::vector<std::string>& names, const std::string& path);
std::vector<std::string> parse_dictionary_tsv(const std::string& path);

// Stream rows: t, u, v, +|-, delta.  Timestamps must be non-decreasing,
// deltas positive.  Ids are dense integers.
std::vector<WeightUpdate> parse_stream_tsv(const std::string& path);
void write_stream_tsv(const std::vector<WeightUpdate>& stream, const std::string& path);

// Turns a static snapshot into (base graph, update stream) whose replay ends
// exactly at the snapshot, with canonical weights: LT edges weigh 1, IC edges
// 1/in-degree(v) measured on the full graph; LT self-weights pass through.
// Edges are split base/churn/arrival; churn edges sit in the base and emit a
// decrease then an increase of the same uniform delta, arrival edges are
// absent from the base and emit one insert.  The shuffled stream keeps each
// churn pair ordered (decrease first) and is stamped t = 1..len.
struct WorkloadSpec {
  Model model = Model::LT;
  double base_frac = 0.85;
  double churn_frac = 0.05;
  double arrival_frac = 0.10;
  std::uint64_t seed = 1;
  int instances = 1;  // consumed by the driver: instance i runs with seed + i
};

struct Workload {
  DynamicGraph base;
  DynamicGraph final_graph;
  std::vector<WeightUpdate> stream;
};

Workload generate_workload(const DynamicGraph& full, const WorkloadSpec& spec);

}  // namespace rivulet
