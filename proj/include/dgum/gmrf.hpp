#ifndef DGUM_GMRF_HPP
#define DGUM_GMRF_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dgum/covariance.hpp"
#include "dgum/lattice.hpp"
#include "dgum/random.hpp"

namespace dgum {

/// K-1 real fields over one grid: a multivariate GMRF realization.
using RealFieldStack = std::vector<RealField>;

enum class GmrfMethod { fourier, spectral, cholesky };

/// How the Fourier sampler maps the covariance onto a torus.
///  - periodic: the grid itself is the torus; the field is periodic with
///    covariance C(torus distance). Fails if that base is not nonnegative
///    definite.
///  - padded: the grid is a window of a larger torus chosen so the base is
///    nonnegative definite; the window has covariance C(plane distance).
///  - automatic: periodic when the grid torus admits the covariance, padded
///    otherwise.
enum class Embedding { padded, periodic, automatic };

/// Distance used to build the dense covariance of the Cholesky sampler.
enum class DistanceMetric { torus, plane };

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr Index kMaxCholeskySites = 4096;
inline constexpr Index kMaxEmbeddingSites = Index{1} << 24;

/// Smallest torus (at least twice the window minus one in each dimension,
/// doubled as needed) on which the Matérn base is nonnegative definite.
/// Throws EmbeddingError past kMaxEmbeddingSites.
GridShape embedding_torus(const GridShape& window, const CovarianceSpec& spec);

/// Torus and spectrum used by the Fourier sampler for a given embedding.
struct CirculantEmbedding {
  GridShape torus;
  Spectrum spectrum;
};

CirculantEmbedding embed(const GridShape& window, const CovarianceSpec& spec,
                         Embedding embedding);

/// Circulant-embedding sampler; the spectrum is computed once at construction.
class FourierSampler {
 public:
  FourierSampler(const GridShape& window, const CovarianceSpec& spec,
                 Embedding embedding = Embedding::padded);

  const GridShape& window() const { return window_; }
  const GridShape& torus() const { return torus_; }
  const Spectrum& spectrum() const { return spectrum_; }

  RealField sample(Seed seed) const;

  /// Real and imaginary parts of one complex draw: two independent fields
  /// with the same covariance for the price of one transform.
  std::pair<RealField, RealField> sample_pair(Seed seed) const;

 private:
  FourierSampler(const GridShape& window, CirculantEmbedding embedding);

  GridShape window_;
  GridShape torus_;
  Spectrum spectrum_;
  RealField amplitude_;  // sqrt(eigenvalues)
};

/// Sum-of-cosines sampler with Matérn spectral measure and `bands` bands.
class SpectralSampler {
 public:
  SpectralSampler(const GridShape& shape, const CovarianceSpec& spec, int bands);

  const GridShape& shape() const { return shape_; }
  int bands() const { return bands_; }

  RealField sample(Seed seed) const;

  /// Frequency (row, col) and phase of band `i` for the given seed.
  struct Band {
    double eta_row;
    double eta_col;
    double phase;
  };
  Band band(Seed seed, int i) const;

 private:
  GridShape shape_;
  CovarianceSpec spec_;
  int bands_;
};

/// Exact sampler through a dense Cholesky factor. Small grids only.
class CholeskySampler {
 public:
  CholeskySampler(const GridShape& shape, const CovarianceSpec& spec,
                  DistanceMetric metric = DistanceMetric::torus);

  const Eigen::MatrixXd& covariance() const { return covariance_; }
  RealField sample(Seed seed) const;

 private:
  GridShape shape_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd factor_;  // lower triangular
};

/// Dense site-by-site covariance matrix.
Eigen::MatrixXd dense_covariance(const GridShape& shape, const CovarianceSpec& spec,
                                 DistanceMetric metric);

RealField sample_fourier(const GridShape& shape, const CovarianceSpec& spec, Seed seed,
                         Embedding embedding = Embedding::padded);
RealField sample_spectral(const GridShape& shape, const CovarianceSpec& spec, int bands,
                          Seed seed);
RealField sample_cholesky(const GridShape& shape, const CovarianceSpec& spec, Seed seed,
                          DistanceMetric metric = DistanceMetric::torus);

/// Parameters of a (K-1)-component GMRF with independent components.
struct MultivariateGmrfSpec {
  int classes = 2;
  /// Per-component means; empty means all zero (balanced).
  std::vector<double> means;
  /// One shared spec (isotropic) or one per component (anisotropic).
  std::vector<CovarianceSpec> covariances{CovarianceSpec{}};
  GmrfMethod method = GmrfMethod::fourier;
  int bands = 5000;
  Embedding embedding = Embedding::padded;
  DistanceMetric cholesky_metric = DistanceMetric::torus;

  int components() const { return classes - 1; }
  double mean(int k) const { return means.empty() ? 0.0 : means[k]; }
  const CovarianceSpec& covariance(int k) const {
    return covariances.size() == 1 ? covariances.front() : covariances[k];
  }
  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;
};

/// Prepared multivariate sampler: per-component spectra or factors are built
/// once and reused across draws.
class MultivariateSampler {
 public:
  MultivariateSampler(const GridShape& shape, MultivariateGmrfSpec spec);
  ~MultivariateSampler();
  MultivariateSampler(MultivariateSampler&&) noexcept;
  MultivariateSampler& operator=(MultivariateSampler&&) noexcept;

  const GridShape& shape() const { return shape_; }
  const MultivariateGmrfSpec& spec() const { return spec_; }

  /// Component k uses seed derive_key(seed, {k}) and is shifted by means[k].
  RealFieldStack sample(Seed seed) const;
  RealField sample_component(int k, Seed seed) const;

 private:
  struct Component;
  GridShape shape_;
  MultivariateGmrfSpec spec_;
  std::vector<std::shared_ptr<const Component>> components_;
};

RealFieldStack sample_multivariate(const GridShape& shape, const MultivariateGmrfSpec& spec,
                                   Seed seed);

Seed component_seed(Seed seed, int component);

}  // namespace dgum

#endif  // DGUM_GMRF_HPP
