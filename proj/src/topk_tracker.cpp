#include "rivulet/topk_tracker.hpp"

#include <cmath>

namespace rivulet {

TopkTracker::TopkTracker(DynamicGraph graph, TopKConfig cfg, std::uint64_t seed,
                         std::uint64_t adapt_every)
    : g_(std::move(graph)), cfg_(cfg), adapt_every_(adapt_every) {
  const std::uint64_t n = g_.num_nodes();
  if (n == 0) throw Error(Errc::InvalidConfig, "empty graph");
  if (cfg.k < 1 || cfg.k > n) throw Error(Errc::InvalidConfig, "k outside [1, n]");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw Error(Errc::InvalidConfig, "epsilon outside (0,1)");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw Error(Errc::InvalidConfig, "delta outside (0,1)");
  if (adapt_every_ == 0) throw Error(Errc::InvalidConfig, "adapt_every must be >= 1");
  log_term_ = std::log(2.0 * static_cast<double>(n) / cfg.delta);
  floor_ = static_cast<std::uint64_t>(std::ceil(192.0 / cfg.epsilon * log_term_));
  Rng root(seed);
  r_ = make_collection(&g_, root.fork(0));
  r1_ = make_collection(&g_, root.fork(1));
}

double TopkTracker::x_for(std::size_t m) const {
  return static_cast<double>(m) * cfg_.epsilon * cfg_.epsilon / (48.0 * log_term_);
}

void TopkTracker::grow_to_sufficiency() {
  while (r_->size() < floor_) r_->add_fresh();
  x_ = x_for(r_->size());
  while (r_->index().max_fraction() >= x_ - cfg_.epsilon) {
    r_->add_fresh();
    x_ = x_for(r_->size());
  }
}

void TopkTracker::shrink_if_redundant() {
  while (r_->size() > floor_ && r_->index().max_fraction() < x_ - cfg_.epsilon) {
    r_->remove_last();
    x_ = x_for(r_->size());
    if (r_->index().max_fraction() >= x_ - cfg_.epsilon || r_->size() < floor_) {
      r_->restore_last_removed();
      x_ = x_for(r_->size());
      break;
    }
  }
}

void TopkTracker::sync_filter_size() {
  while (r1_->size() < r_->size()) r1_->add_fresh();
  while (r1_->size() > r_->size()) r1_->remove_last();
}

void TopkTracker::adapt_now() {
  since_adapt_ = 0;
  grow_to_sufficiency();
  shrink_if_redundant();
  sync_filter_size();
}

void TopkTracker::build() { adapt_now(); }

void TopkTracker::process_update(const WeightUpdate& up) {
  UpdateDelta d = g_.apply_update(up);
  r_->apply_delta(d);
  r1_->apply_delta(d);
  if (++since_adapt_ >= adapt_every_) adapt_now();
}

double TopkTracker::refined_filter_threshold(double f1k, double x, double epsilon) {
  if (!(x > 0.0)) throw Error(Errc::InvalidConfig, "x must be positive");
  if (f1k < epsilon / 4.0)
    throw Error(Errc::DegenerateQuantile, "k-th fraction below epsilon/4");
  double eps1 = epsilon * std::sqrt((f1k - epsilon / 4.0) / (4.0 * x));
  if (eps1 > epsilon / 2.0) eps1 = epsilon / 2.0;
  return f1k - epsilon / 4.0 - eps1 / 2.0;
}

TrackerReport TopkTracker::report(std::uint64_t t) const {
  if (r_->size() != r1_->size())
    throw Error(Errc::SampleSizeMismatch, "R and R1 sizes differ");
  const double n = static_cast<double>(g_.num_nodes());
  const double M = static_cast<double>(r1_->size());
  double f1k = r1_->index().kth_fraction(cfg_.k);

  double theta;
  try {
    theta = refined_filter_threshold(f1k, x_, cfg_.epsilon);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateQuantile) throw;
    theta = std::max(0.0, f1k - cfg_.epsilon / 2.0);  // coarse fallback
  }

  TrackerReport rep;
  rep.t = t;
  rep.mode = "topk";
  rep.k = cfg_.k;
  rep.M = r1_->size();
  rep.x = x_;
  rep.theta = theta;
  rep.epsilon = cfg_.epsilon;
  rep.delta = cfg_.delta;

  std::uint64_t cut = 0;
  if (theta > 0.0) cut = static_cast<std::uint64_t>(std::ceil(theta * M - 1e-9));
  for (NodeId u : r1_->index().nodes_with_degree_at_least(cut)) {
    double f = static_cast<double>(r1_->index().degree(u)) / M;
    if (f >= theta) rep.nodes.push_back({u, n * f});
  }
  return rep;
}

}  // namespace rivulet
