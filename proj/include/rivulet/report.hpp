#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rivulet/oracle.hpp"
#include "rivulet/types.hpp"

namespace rivulet {

struct ReportEntry {
  NodeId id;
  double est;  // n * F_R(id)
};

// One emitted tracking snapshot; serialized as a single JSON line.
struct TrackerReport {
  std::uint64_t t = 0;
  std::string mode;  // "threshold" | "topk"
  std::vector<ReportEntry> nodes;
  std::uint64_t M = 0;
  double T = 0.0;        // threshold mode
  std::uint32_t k = 0;   // topk mode
  double x = 0.0;        // topk mode
  double theta = 0.0;    // topk mode
  double epsilon = 0.0;
  double delta = 0.0;
};

std::string report_to_jsonl(const TrackerReport& r);
TrackerReport report_from_json(const std::string& line);
std::vector<TrackerReport> read_report_jsonl(const std::string& path);

// Fraction of the oracle-true influential set that the report found.  The
// true set is {u : I_u >= T} in threshold mode and the k most influential
// nodes (ties by ascending id) in topk mode.
double report_recall(const TrackerReport& r, const InfluenceTable& oracle);

// Largest shortfall, in absolute influence, of a reported node against the
// mode's bar (T, or the k-th influence).  0 when every reported node clears it.
double report_max_fp_error(const TrackerReport& r, const InfluenceTable& oracle);

double report_jaccard(const TrackerReport& a, const TrackerReport& b);

}  // namespace rivulet
