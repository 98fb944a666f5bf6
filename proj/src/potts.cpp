#include "dgum/potts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dgum {

void PottsSpec::validate() const {
  if (classes < 2) throw std::invalid_argument("Potts model needs at least two classes");
  if (!(beta >= 0)) throw std::invalid_argument("beta must be nonnegative");
}

namespace {

double signed_beta(const PottsSpec& spec) {
  return spec.interaction == Interaction::attractive ? spec.beta : -spec.beta;
}

}  // namespace

Eigen::VectorXd conditional_distribution(const LabelField& labels, Index site,
                                         const PottsSpec& spec) {
  spec.validate();
  const GridShape shape = shape_of(labels);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(spec.classes);
  for (Index t : neighbors(site, shape, spec.system)) counts(labels.data()[t]) += 1.0;
  Eigen::VectorXd logits = signed_beta(spec) * counts;
  logits.array() -= logits.maxCoeff();
  Eigen::VectorXd p = logits.array().exp();
  return p / p.sum();
}

ConvergenceMonitor::ConvergenceMonitor(int window, double threshold)
    : window_(window), threshold_(threshold) {
  if (window < 1) throw std::invalid_argument("convergence window must be >= 1");
}

double ConvergenceMonitor::changed_fraction(const LabelField& current) const {
  if (history_.empty()) return 1.0;
  const Index n = current.size();
  Index changed = 0;
  for (Index s = 0; s < n; ++s) {
    const std::uint16_t* counts = counts_.data() + s * slots_;
    int majority = 0;
    for (int k = 1; k < slots_; ++k) {
      if (counts[k] > counts[majority]) majority = k;
    }
    if (current.data()[s] != majority) ++changed;
  }
  return static_cast<double>(changed) / static_cast<double>(n);
}

void ConvergenceMonitor::rebuild_counts(int slots) {
  slots_ = slots;
  const Index n = history_.front().size();
  counts_.assign(n * slots_, 0);
  for (const auto& f : history_) {
    for (Index s = 0; s < n; ++s) ++counts_[s * slots_ + f.data()[s]];
  }
}

bool ConvergenceMonitor::converged(const LabelField& current) const {
  return recorded() >= window_ && changed_fraction(current) < threshold_;
}

void ConvergenceMonitor::push(const LabelField& field) {
  const bool reshaped = !history_.empty() && history_.front().size() != field.size();
  if (reshaped) history_.clear();
  history_.push_back(field);
  const int needed = field.maxCoeff() + 1;
  if (reshaped || history_.size() == 1 || needed > slots_) {
    while (recorded() > window_) history_.pop_front();
    rebuild_counts(std::max(needed, slots_));
    return;
  }
  const Index n = field.size();
  for (Index s = 0; s < n; ++s) ++counts_[s * slots_ + field.data()[s]];
  if (recorded() > window_) {
    const LabelField& oldest = history_.front();
    for (Index s = 0; s < n; ++s) --counts_[s * slots_ + oldest.data()[s]];
    history_.pop_front();
  }
}

bool ConvergenceMonitor::observe(const LabelField& current) {
  const bool done = converged(current);
  push(current);
  return done;
}

GibbsChain::GibbsChain(const GridShape& shape, const PottsSpec& spec, Seed seed,
                       GibbsSchedule schedule)
    : shape_(shape),
      spec_(spec),
      seed_(seed),
      schedule_(schedule),
      coloring_(color_grid(shape, spec.system)),
      color_classes_(coloring_.classes()),
      labels_(shape.height(), shape.width()) {
  spec_.validate();
  const int count = neighbor_count(spec_.system);
  weights_.resize(count + 1);
  for (int c = 0; c <= count; ++c) weights_[c] = std::exp(signed_beta(spec_) * c);

  const std::uint64_t key = derive_key(seed_.value, {0});
  for (Index s = 0; s < labels_.size(); ++s) {
    const double u = to_unit(mix64(key ^ mix64(static_cast<std::uint64_t>(s))));
    labels_.data()[s] = static_cast<std::int32_t>(u * spec_.classes);
  }
}

void GibbsChain::update(Index site, std::uint64_t key, std::vector<int>& counts) {
  const int nb = neighbor_count(spec_.system);
  std::fill(counts.begin(), counts.end(), 0);
  for (int k = 0; k < nb; ++k) ++counts[labels_.data()[neighbor_unchecked(shape_, site, k)]];

  double total = 0;
  for (int k = 0; k < spec_.classes; ++k) total += weights_[counts[k]];
  const double u = to_unit(mix64(key ^ mix64(static_cast<std::uint64_t>(site)))) * total;

  int label = 0;
  double cumulative = weights_[counts[0]];
  while (label + 1 < spec_.classes && u >= cumulative) cumulative += weights_[counts[++label]];
  labels_.data()[site] = label;
}

void GibbsChain::sweep() {
  ++iteration_;
  const std::uint64_t key = derive_key(seed_.value, {static_cast<std::uint64_t>(iteration_)});
  if (schedule_ == GibbsSchedule::sequential) {
    std::vector<int> counts(spec_.classes);
    for (Index s = 0; s < shape_.size(); ++s) update(s, key, counts);
    return;
  }
  for (const auto& sites : color_classes_) {
    const Index count = static_cast<Index>(sites.size());
#pragma omp parallel
    {
      std::vector<int> counts(spec_.classes);
#pragma omp for schedule(static)
      for (Index i = 0; i < count; ++i) update(sites[i], key, counts);
    }
  }
}

GibbsResult run_gibbs(const GridShape& shape, const PottsSpec& spec, Seed seed, int max_iters,
                      GibbsSchedule schedule, ConvergenceMonitor monitor) {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  GibbsChain chain(shape, spec, seed, schedule);
  while (chain.iteration() < max_iters) {
    chain.sweep();
    if (monitor.observe(chain.state())) return {chain.state(), chain.iteration(), true};
  }
  return {chain.state(), chain.iteration(), false};
}

GibbsResult gibbs_sample(const GridShape& shape, const PottsSpec& spec, Seed seed,
                         int max_iters) {
  return run_gibbs(shape, spec, seed, max_iters, GibbsSchedule::sequential);
}

GibbsResult chromatic_gibbs_sample(const GridShape& shape, const PottsSpec& spec, Seed seed,
                                   int max_iters) {
  return run_gibbs(shape, spec, seed, max_iters, GibbsSchedule::chromatic);
}

}  // namespace dgum
