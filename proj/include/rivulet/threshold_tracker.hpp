#pragma once

#include <memory>

#include "rivulet/report.hpp"
#include "rivulet/rr_collection.hpp"

namespace rivulet {

struct ThresholdConfig {
  double T = 0.0;       // absolute influence threshold, in (epsilon*n, n]
  double epsilon = 0.0;
  double delta = 0.0;
};

// Fixed-size sample tracker: with M = ceil(12T/(n eps^2) ln(2n/delta)) sets,
// with probability >= 1-delta every node with I_u >= T estimates at least
// T - eps*n/2 while nodes with I_u < T - eps*n stay below it, and M never has
// to change as the graph does.
class ThresholdTracker {
 public:
  ThresholdTracker(DynamicGraph graph, ThresholdConfig cfg, std::uint64_t seed);

  static std::uint64_t required_sample_size(std::uint64_t n, double T, double epsilon,
                                            double delta);

  void build();  // generate the M sets on the current graph
  void process_update(const WeightUpdate& up);
  TrackerReport report(std::uint64_t t) const;

  std::uint64_t sample_size() const { return M_; }
  const ThresholdConfig& config() const { return cfg_; }
  const DynamicGraph& graph() const { return g_; }
  RrCollectionBase& collection() { return *coll_; }
  const RrCollectionBase& collection() const { return *coll_; }

 private:
  DynamicGraph g_;
  ThresholdConfig cfg_;
  std::uint64_t M_;
  std::unique_ptr<RrCollectionBase> coll_;
};

}  // namespace rivulet
