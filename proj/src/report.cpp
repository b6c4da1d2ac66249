#include "rivulet/report.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "rivulet/errors.hpp"

namespace rivulet {

using ordered_json = nlohmann::ordered_json;

std::string report_to_jsonl(const TrackerReport& r) {
  ordered_json j;
  j["t"] = r.t;
  j["mode"] = r.mode;
  if (r.mode == "topk") j["k"] = r.k;
  ordered_json nodes = ordered_json::array();
  for (const auto& e : r.nodes) nodes.push_back({{"id", e.id}, {"est", e.est}});
  j["nodes"] = std::move(nodes);
  j["M"] = r.M;
  if (r.mode == "threshold") j["T"] = r.T;
  if (r.mode == "topk") {
    j["x"] = r.x;
    j["theta"] = r.theta;
  }
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta;
  return j.dump();
}

TrackerReport report_from_json(const std::string& line) {
  TrackerReport r;
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw Error(Errc::ParseError, std::string("bad report line: ") + e.what());
  }
  r.t = j.at("t").get<std::uint64_t>();
  r.mode = j.at("mode").get<std::string>();
  for (const auto& e : j.at("nodes"))
    r.nodes.push_back({e.at("id").get<NodeId>(), e.at("est").get<double>()});
  r.M = j.at("M").get<std::uint64_t>();
  if (j.contains("T")) r.T = j["T"].get<double>();
  if (j.contains("k")) r.k = j["k"].get<std::uint32_t>();
  if (j.contains("x")) r.x = j["x"].get<double>();
  if (j.contains("theta")) r.theta = j["theta"].get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.delta = j.at("delta").get<double>();
  return r;
}

std::vector<TrackerReport> read_report_jsonl(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot open " + path);
  std::vector<TrackerReport> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(report_from_json(line));
  }
  return out;
}

namespace {

std::vector<NodeId> true_set(const TrackerReport& r, const InfluenceTable& oracle) {
  if (r.mode == "topk") return oracle.top_k(r.k);
  std::vector<NodeId> out;
  for (const auto& e : oracle.entries)
    if (e.influence >= r.T) out.push_back(e.node);
  return out;
}

}  // namespace

double report_recall(const TrackerReport& r, const InfluenceTable& oracle) {
  std::vector<NodeId> truth = true_set(r, oracle);
  if (truth.empty()) return 1.0;
  std::unordered_set<NodeId> reported;
  for (const auto& e : r.nodes) reported.insert(e.id);
  std::size_t hit = 0;
  for (NodeId u : truth)
    if (reported.count(u)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

double report_max_fp_error(const TrackerReport& r, const InfluenceTable& oracle) {
  double bar = r.mode == "topk" ? oracle.kth_influence(r.k) : r.T;
  double worst = 0.0;
  for (const auto& e : r.nodes)
    worst = std::max(worst, bar - oracle.influence(e.id));
  return worst;
}

double report_jaccard(const TrackerReport& a, const TrackerReport& b) {
  std::unordered_set<NodeId> sa, sb;
  for (const auto& e : a.nodes) sa.insert(e.id);
  for (const auto& e : b.nodes) sb.insert(e.id);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (NodeId u : sa)
    if (sb.count(u)) ++inter;
  return static_cast<double>(inter) /
         static_cast<double>(sa.size() + sb.size() - inter);
}

}  // namespace rivulet
