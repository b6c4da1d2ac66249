#include "rivulet/threshold_tracker.hpp"

#include <cmath>

namespace rivulet {

std::uint64_t ThresholdTracker::required_sample_size(std::uint64_t n, double T, double epsilon,
                                                     double delta) {
  if (n == 0) throw Error(Errc::InvalidConfig, "empty graph");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::InvalidConfig, "epsilon outside (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::InvalidConfig, "delta outside (0,1)");
  if (!(T > 0.0) || T > static_cast<double>(n))
    throw Error(Errc::InvalidConfig, "T outside (0, n]");
  if (!(epsilon * static_cast<double>(n) < T))
    throw Error(Errc::InvalidConfig, "epsilon*n must stay below T");
  double nn = static_cast<double>(n);
  double m = 12.0 * T / (nn * epsilon * epsilon) * std::log(2.0 * nn / delta);
  return static_cast<std::uint64_t>(std::ceil(m));
}

ThresholdTracker::ThresholdTracker(DynamicGraph graph, ThresholdConfig cfg, std::uint64_t seed)
    : g_(std::move(graph)),
      cfg_(cfg),
      M_(required_sample_size(g_.num_nodes(), cfg.T, cfg.epsilon, cfg.delta)),
      coll_(make_collection(&g_, Rng(seed).fork(0))) {}

void ThresholdTracker::build() {
  while (coll_->size() < M_) coll_->add_fresh();
}

void ThresholdTracker::process_update(const WeightUpdate& up) {
  UpdateDelta d = g_.apply_update(up);
  coll_->apply_delta(d);
}

TrackerReport ThresholdTracker::report(std::uint64_t t) const {
  if (coll_->size() != M_)
    throw Error(Errc::SampleSizeMismatch, "collection size differs from configured M");
  const double n = static_cast<double>(g_.num_nodes());
  const double M = static_cast<double>(M_);
  const double bound = cfg_.T - 0.5 * cfg_.epsilon * n;  // report bar on n*F(u)

  TrackerReport rep;
  rep.t = t;
  rep.mode = "threshold";
  rep.M = M_;
  rep.T = cfg_.T;
  rep.epsilon = cfg_.epsilon;
  rep.delta = cfg_.delta;

  std::uint64_t cut = 0;
  if (bound > 0.0) cut = static_cast<std::uint64_t>(std::ceil(bound * M / n - 1e-9));
  for (NodeId u : coll_->index().nodes_with_degree_at_least(cut)) {
    double est = n * static_cast<double>(coll_->index().degree(u)) / M;
    if (est >= bound) rep.nodes.push_back({u, est});
  }
  return rep;
}

}  // namespace rivulet
