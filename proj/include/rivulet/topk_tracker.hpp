#pragma once

#include <memory>

#include "rivulet/report.hpp"
#include "rivulet/rr_collection.hpp"

namespace rivulet {

struct TopKConfig {
  std::uint32_t k = 1;
  double epsilon = 0.0;
  double delta = 0.0;
};

// Adaptive-size tracker for the k most influential nodes.  The primary
// collection R sets the sample size: after every update R grows until
// F_R* < x - eps (x = |R| eps^2 / (48 ln(2n/delta)), floored so x >= 4 eps)
// and shrinks while that slack holds, keeping |R| = 48x/eps^2 ln(2n/delta).
// A second collection R1 of the same size, fed by an independent stream,
// answers the actual query: sizing decisions read only R, so R1's estimates
// stay clean of the stopping-time conditioning.  Reports return every node of
// R1 at or above the refined filter threshold.
class TopkTracker {
 public:
  TopkTracker(DynamicGraph graph, TopKConfig cfg, std::uint64_t seed,
              std::uint64_t adapt_every = 1);

  void build();
  void process_update(const WeightUpdate& up);
  void adapt_now();  // run the grow/shrink/sync cycle immediately
  TrackerReport report(std::uint64_t t) const;

  // theta = F1k - eps/4 - eps1/2 with eps1 = eps sqrt((F1k - eps/4)/(4x)),
  // clamped to eps/2 so the result never loosens past F1k - eps/2.
  // Throws DegenerateQuantile when F1k < eps/4.
  static double refined_filter_threshold(double f1k, double x, double epsilon);

  double x() const { return x_; }
  std::uint64_t floor_size() const { return floor_; }
  const TopKConfig& config() const { return cfg_; }
  const DynamicGraph& graph() const { return g_; }
  RrCollectionBase& primary() { return *r_; }
  const RrCollectionBase& primary() const { return *r_; }
  RrCollectionBase& filter() { return *r1_; }
  const RrCollectionBase& filter() const { return *r1_; }

 private:
  void grow_to_sufficiency();
  void shrink_if_redundant();
  void sync_filter_size();
  double x_for(std::size_t m) const;

  DynamicGraph g_;
  TopKConfig cfg_;
  double log_term_;  // ln(2n/delta)
  std::uint64_t floor_;
  std::unique_ptr<RrCollectionBase> r_, r1_;
  double x_ = 0.0;
  std::uint64_t adapt_every_;
  std::uint64_t since_adapt_ = 0;
};

}  // namespace rivulet
