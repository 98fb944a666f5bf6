#ifndef DGUM_POTTS_HPP
#define DGUM_POTTS_HPP

#include <deque>
#include <vector>

#include <Eigen/Core>

#include "dgum/lattice.hpp"
#include "dgum/random.hpp"

namespace dgum {

/// attractive: p(x_s = k | .) ~ exp(+beta * #{neighbors labelled k}).
/// repulsive:  the same with exp(-beta * ...).
enum class Interaction { attractive, repulsive };

/// Potts model over class indices 0..K-1.
struct PottsSpec {
  int classes = 2;
  double beta = 0.5;
  Neighborhood system = Neighborhood::eight;
  Interaction interaction = Interaction::attractive;

  void validate() const;
};

/// Full conditional of the label at `site` given its neighbors.
Eigen::VectorXd conditional_distribution(const LabelField& labels, Index site,
                                         const PottsSpec& spec);

/// Stopping rule: converged when fewer than `threshold` of the sites of the
/// current field differ from their most frequent label over the previous
/// `window` fields. Never converged before `window` fields are recorded.
class ConvergenceMonitor {
 public:
  explicit ConvergenceMonitor(int window = 10, double threshold = 0.05);

  int window() const { return window_; }
  double threshold() const { return threshold_; }
  int recorded() const { return static_cast<int>(history_.size()); }

  /// Fraction of sites where `current` disagrees with the per-site majority of
  /// the recorded history (ties go to the smallest label). 1 if empty.
  double changed_fraction(const LabelField& current) const;
  bool converged(const LabelField& current) const;
  /// Records a field, dropping the oldest once the window is full.
  void push(const LabelField& field);
  /// converged(current), then push(current).
  bool observe(const LabelField& current);

 private:
  void rebuild_counts(int slots);

  int window_;
  double threshold_;
  std::deque<LabelField> history_;
  // Per-site label counts over history_, site-major with slots_ entries each.
  std::vector<std::uint16_t> counts_;
  int slots_ = 0;
};

enum class GibbsSchedule { sequential, chromatic };

/// One Gibbs chain. Initial labels are i.i.d. uniform. Each update draws a
/// single uniform keyed by (seed, iteration, site), so a chromatic sweep gives
/// the same result for any thread count.
class GibbsChain {
 public:
  GibbsChain(const GridShape& shape, const PottsSpec& spec, Seed seed,
             GibbsSchedule schedule = GibbsSchedule::sequential);

  const LabelField& state() const { return labels_; }
  int iteration() const { return iteration_; }
  const Coloring& coloring() const { return coloring_; }

  void sweep();

 private:
  void update(Index site, std::uint64_t key, std::vector<int>& counts);

  GridShape shape_;
  PottsSpec spec_;
  Seed seed_;
  GibbsSchedule schedule_;
  Coloring coloring_;
  std::vector<std::vector<Index>> color_classes_;
  std::vector<double> weights_;  // weight for each neighbor count
  LabelField labels_;
  int iteration_ = 0;
};

struct GibbsResult {
  LabelField labels;
  int iterations = 0;
  bool converged = false;
};

inline constexpr int kDefaultMaxIters = 1000;

/// Runs sweeps until the ConvergenceMonitor fires or max_iters sweeps are done.
GibbsResult run_gibbs(const GridShape& shape, const PottsSpec& spec, Seed seed, int max_iters,
                      GibbsSchedule schedule, ConvergenceMonitor monitor = ConvergenceMonitor());

GibbsResult gibbs_sample(const GridShape& shape, const PottsSpec& spec, Seed seed,
                         int max_iters = kDefaultMaxIters);
GibbsResult chromatic_gibbs_sample(const GridShape& shape, const PottsSpec& spec, Seed seed,
                                   int max_iters = kDefaultMaxIters);

}  // namespace dgum

#endif  // DGUM_POTTS_HPP
