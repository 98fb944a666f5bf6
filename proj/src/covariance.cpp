#include "dgum/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dgum {

void CovarianceSpec::validate() const {
  if (!(sigma > 0) || !(kappa > 0) || !(nu > 0)) {
    std::ostringstream msg;
    msg << "covariance parameters must be positive (sigma=" << sigma << ", kappa=" << kappa
        << ", nu=" << nu << ")";
    throw std::invalid_argument(msg.str());
  }
}

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
// for |mu| <= 1/2. Near mu = 0 the difference cancels, so use the Taylor
// coefficients of 1/Gamma(z) there.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
  if (std::abs(mu) < 1e-2) {
    constexpr double c2 = 0.5772156649015329;
    constexpr double c3 = -0.6558780715202538;
    constexpr double c4 = -0.0420026350340952;
    constexpr double c5 = 0.1665386113822915;
    constexpr double c6 = -0.0421977345555443;
    constexpr double c7 = -0.0096219715278770;
    constexpr double c8 = 0.0072189432466630;
    const double m2 = mu * mu;
    gam1 = -(c2 + m2 * (c4 + m2 * (c6 + m2 * c8)));
    gam2 = 1.0 + m2 * (c3 + m2 * (c5 + m2 * c7));
    gampl = gam2 - mu * gam1;
    gammi = gam2 + mu * gam1;
    return;
  }
  gampl = 1.0 / std::tgamma(1.0 + mu);
  gammi = 1.0 / std::tgamma(1.0 - mu);
  gam1 = (gammi - gampl) / (2.0 * mu);
  gam2 = (gammi + gampl) / 2.0;
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x < 2.
void temme_series(double mu, double x, double& kmu, double& kmu1) {
  const double x2 = 0.5 * x;
  const double pimu = std::numbers::pi * mu;
  const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;

  double gam1, gam2, gampl, gammi;
  temme_gammas(mu, gam1, gam2, gampl, gammi);

  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  const double mu2 = mu * mu;
  for (int i = 1; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu2);
    c *= d / i;
    p /= i - mu;
    q /= i + mu;
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  kmu = sum;
  kmu1 = sum1 * 2.0 / x;
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x >= 2 (Steed's algorithm on CF2).
void steed_fraction(double mu, double x, double& kmu, double& kmu1) {
  const double mu2 = mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  kmu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double bessel_k(double nu, double x) {
  if (!(x > 0)) throw std::domain_error("bessel_k requires x > 0");
  nu = std::abs(nu);  // K_{-nu} = K_nu
  const int order = static_cast<int>(nu + 0.5);
  const double mu = nu - order;

  double kmu, kmu1;
  if (x < 2.0) {
    temme_series(mu, x, kmu, kmu1);
  } else {
    steed_fraction(mu, x, kmu, kmu1);
  }
  for (int i = 1; i <= order; ++i) {
    const double next = (mu + i) * (2.0 / x) * kmu1 + kmu;
    kmu = kmu1;
    kmu1 = next;
  }
  return kmu;
}

double matern(double distance, const CovarianceSpec& spec) {
  if (distance <= 0) return spec.variance();
  const double x = spec.kappa * distance;
  // K_nu underflows long before the prefactor matters.
  if (x > 700.0) return 0.0;
  const double norm = std::pow(2.0, spec.nu - 1.0) * std::tgamma(spec.nu);
  return spec.variance() / norm * std::pow(x, spec.nu) * bessel_k(spec.nu, x);
}

CirculantBase circulant_base(const GridShape& shape, const CovarianceSpec& spec) {
  spec.validate();
  const Index h = shape.height();
  const Index w = shape.width();
  RealField values(h, w);
  // Only lags up to half the torus are distinct; mirror the rest.
  for (Index dr = 0; dr <= h / 2; ++dr) {
    for (Index dc = 0; dc <= w / 2; ++dc) {
      const double c = matern(torus_lag_distance(dr, dc, shape), spec);
      values(dr, dc) = c;
      values((h - dr) % h, dc) = c;
      values(dr, (w - dc) % w) = c;
      values((h - dr) % h, (w - dc) % w) = c;
    }
  }
  return {shape, std::move(values)};
}

ComplexField raw_eigenvalues(const CirculantBase& base) { return fft2(base.values); }

Spectrum base_eigenvalues(const CirculantBase& base) {
  const ComplexField raw = raw_eigenvalues(base);
  const double variance = base.values(0, 0);

  Spectrum out{base.shape, raw.real(), 0.0, raw.imag().abs().maxCoeff()};
  out.min_eigenvalue = out.eigenvalues.minCoeff();
  if (out.min_eigenvalue < -kEigenClamp * variance) {
    std::ostringstream msg;
    msg << "covariance not embeddable on " << base.shape.height() << "x"
        << base.shape.width() << " torus: smallest eigenvalue " << out.min_eigenvalue;
    throw EmbeddingError(msg.str(), out.min_eigenvalue);
  }
  out.eigenvalues = out.eigenvalues.max(0.0);
  return out;
}

}  // namespace dgum
