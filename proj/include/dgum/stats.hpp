#ifndef DGUM_STATS_HPP
#define DGUM_STATS_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "dgum/gmrf.hpp"
#include "dgum/gum.hpp"
#include "dgum/lattice.hpp"
#include "dgum/random.hpp"

namespace dgum {

/// Malformed statistical input: foreign labels, shape mismatches, too few replicates.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fraction of sites per class. Throws DataError on a label outside the set.
Eigen::VectorXd class_frequencies(const LabelField& labels, const ClassSet& classes);

struct BalanceReport {
  Eigen::VectorXd mean_frequencies;
  double bias = 0;     // |mean f_0 - 1/K|
  double std_dev = 0;  // sample standard deviation of f_0 across replicates
  int replicates = 0;
};

BalanceReport balance_report(std::span<const LabelField> fields, const ClassSet& classes);

/// Estimates of p(x_i = x_j | round(|i - j|) = d) for integer distance bins.
struct SimilarityCurve {
  std::vector<double> distance;
  std::vector<double> estimate;
  std::vector<Index> pairs;
};

/// Bin centers are the distinct integers round(k * d_max / bins), k = 1..bins.
/// Each bin uses every (ordered, non-wrapped) pair when there are at most
/// `pair_budget` of them, otherwise `pair_budget` pairs drawn uniformly.
SimilarityCurve pairwise_similarity(const LabelField& labels, double d_max, int bins,
                                    Index pair_budget, Seed seed);

/// Mean over sites of the fraction of neighbors sharing the site's label.
double neighbor_agreement(const LabelField& labels, Neighborhood system);

/// Linear-interpolation quantile (q in [0, 1]) of unsorted values.
double quantile(std::vector<double> values, double q);

struct CurvePoint {
  double x = 0;
  double mean = 0;
  double q10 = 0;
  double q90 = 0;
};

CurvePoint summarize(double x, const std::vector<double>& values);

/// Seed of replicate r in the replicate-based estimators.
Seed replicate_seed(Seed seed, int replicate);

/// Neighbor agreement of labels drawn from pi^c(z) for each c. Every
/// replicate draws one GMRF stack z (seed replicate_seed(seed, r)) shared
/// by all c values.
std::vector<CurvePoint> phase_curve_pi(std::span<const double> c_values, const GridShape& shape,
                                       const MultivariateGmrfSpec& base_spec, int replicates,
                                       Seed seed, Neighborhood system = Neighborhood::eight);

struct KappaCurvePoint {
  int classes = 0;
  CurvePoint point;  // x is kappa
};

/// Neighbor agreement of DGUM samples over a (K, kappa) grid. Sigma, nu,
/// method and bands come from `base_spec`.
std::vector<KappaCurvePoint> phase_curve_kappa(std::span<const double> kappa_values,
                                               std::span<const int> class_counts,
                                               const GridShape& shape,
                                               const MultivariateGmrfSpec& base_spec,
                                               int replicates, Seed seed,
                                               Neighborhood system = Neighborhood::eight);

/// Which pairs contribute to a lag: wrapped (every site has a partner) or
/// plane (both ends inside the grid).
enum class LagDomain { torus, plane };

struct CovarianceEntry {
  Index dr = 0;
  Index dc = 0;
  double distance = 0;  // Euclidean length of (dr, dc)
  double value = 0;
  Index pairs = 0;      // per replicate
};

/// Mean of z_s z_{s+lag} over sites and replicates for 0 <= dr <= max_lag,
/// |dc| <= max_lag (one representative per +-lag pair). The fields are taken
/// as zero-mean, so no sample mean is subtracted and the estimate is unbiased.
std::vector<CovarianceEntry> empirical_covariance(std::span<const RealField> fields,
                                                  Index max_lag,
                                                  LagDomain domain = LagDomain::torus);

struct CovarianceBin {
  double distance = 0;  // bin center
  double empirical = 0;
  double target = 0;
  Index lags = 0;
};

/// Groups entries into unit-width bins centered on integers, averaging the
/// empirical values and target(distance) with pair-count weights.
std::vector<CovarianceBin> bin_by_distance(const std::vector<CovarianceEntry>& entries,
                                           double d_max,
                                           const std::function<double(double)>& target);

/// (1/R) sum_r z_r z_r^T over replicate fields flattened in site order.
Eigen::MatrixXd empirical_covariance_matrix(std::span<const RealField> fields);

}  // namespace dgum

#endif  // DGUM_STATS_HPP
