#ifndef DGUM_COVARIANCE_HPP
#define DGUM_COVARIANCE_HPP

#include <stdexcept>
#include <string>

#include "dgum/fft.hpp"
#include "dgum/lattice.hpp"

namespace dgum {

/// Matérn covariance parameters: marginal standard deviation, inverse range
/// and smoothness. All strictly positive.
struct CovarianceSpec {
  double sigma = 1.0;
  double kappa = 0.1;
  double nu = 1.0;

  double variance() const { return sigma * sigma; }
  /// Throws std::invalid_argument unless all parameters are positive.
  void validate() const;
};

/// Raised when a covariance base has eigenvalues below -kEigenClamp * sigma^2,
/// i.e. the covariance is not realizable on the requested torus.
class EmbeddingError : public std::runtime_error {
 public:
  EmbeddingError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

inline constexpr double kEigenClamp = 1e-8;

/// Modified Bessel function of the second kind K_nu(x) for real nu and x > 0.
/// Temme's series below x = 2, Steed's continued fraction above, then upward
/// recurrence in the order. Throws std::domain_error for x <= 0.
double bessel_k(double nu, double x);

/// C(d) = sigma^2 / (2^(nu-1) Gamma(nu)) (kappa d)^nu K_nu(kappa d), C(0) = sigma^2.
double matern(double distance, const CovarianceSpec& spec);

/// First row of the block-circulant covariance on a torus:
/// values(dr, dc) = C(torus_lag_distance(dr, dc)).
struct CirculantBase {
  GridShape shape;
  RealField values;
};

CirculantBase circulant_base(const GridShape& shape, const CovarianceSpec& spec);

/// Eigenvalues of a circulant covariance, i.e. the DFT of its base.
struct Spectrum {
  GridShape shape;
  RealField eigenvalues;       // clamped to >= 0
  double min_eigenvalue = 0;   // before clamping
  double max_imaginary = 0;    // largest |Im| of the raw transform
};

/// Unclamped complex DFT of the base.
ComplexField raw_eigenvalues(const CirculantBase& base);

/// Real part of DFT(base), with roundoff negatives (>= -kEigenClamp * sigma^2)
/// clamped to zero. Throws EmbeddingError otherwise.
Spectrum base_eigenvalues(const CirculantBase& base);

}  // namespace dgum

#endif  // DGUM_COVARIANCE_HPP
