// Shared test scaffolding: inline graph builders, bundled data paths, and a
// self-cleaning temporary directory.
#pragma once

#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rivulet/graph.hpp"
#include "rivulet/stream.hpp"

#ifndef RIVULET_DATA_DIR
#define RIVULET_DATA_DIR "data"
#endif

namespace testutil {

using rivulet::DynamicGraph;
using rivulet::Model;
using rivulet::NodeId;

inline DynamicGraph make_graph(NodeId n, Model m,
                               std::vector<std::tuple<NodeId, NodeId, double>> edges) {
  DynamicGraph g(n, m);
  std::uint64_t t = 0;
  for (auto& [u, v, w] : edges) g.apply_update({++t, u, v, true, w});
  return g;
}

inline std::string data_path(const std::string& rel) {
  return std::string(RIVULET_DATA_DIR) + "/" + rel;
}

struct MicroGraph {
  std::string name;
  Model model;
};

inline const std::vector<MicroGraph>& micro_graphs() {
  static const std::vector<MicroGraph> all = {
      {"path5_lt", Model::LT},    {"star5_lt", Model::LT},    {"cycle5_lt", Model::LT},
      {"trichord_lt", Model::LT}, {"twocomp6_lt", Model::LT}, {"path5_ic", Model::IC},
      {"star5_ic", Model::IC},    {"cycle5_ic", Model::IC},   {"trichord_ic", Model::IC},
      {"twocomp6_ic", Model::IC},
  };
  return all;
}

inline DynamicGraph load_micro(const MicroGraph& m) {
  return rivulet::parse_graph_tsv(data_path("micro/" + m.name + ".tsv"), m.model).graph;
}

struct TmpDir {
  std::filesystem::path path;

  TmpDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int i = 0; i < 64; ++i) {
      auto cand = base / ("rvt-" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(cand, ec)) {
        path = cand;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TmpDir(const TmpDir&) = delete;
  TmpDir& operator=(const TmpDir&) = delete;

  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testutil
