#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dgum/covariance.hpp"

using namespace dgum;

namespace {

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt; the trapezoid rule
// converges geometrically for this integrand.
double bessel_k_quadrature(double nu, double x) {
  const double h = 1e-3;
  double sum = 0.5 * std::exp(-x);
  for (int i = 1;; ++i) {
    const double t = i * h;
    const double term = std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
    sum += term;
    if (term < 1e-300 || (t > 5 && term < 1e-20 * sum)) break;
  }
  return sum * h;
}

double half_integer_k(int twice_nu, double x) {
  const double base = std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x);
  switch (twice_nu) {
    case 1: return base;
    case 3: return base * (1 + 1 / x);
    case 5: return base * (1 + 3 / x + 3 / (x * x));
  }
  return NAN;
}

}  // namespace

TEST(BesselK, ClosedForms) {
  EXPECT_NEAR(bessel_k(0.5, 1.0), 0.4610685044, 1e-9);
  EXPECT_NEAR(bessel_k(1.0, 1.0), 0.6019072302, 1e-9);
  for (double x : {1e-6, 1e-3, 0.1, 0.7, 1.0, 1.99, 2.0, 2.01, 5.0, 17.0, 50.0}) {
    for (int t : {1, 3, 5}) {
      const double expected = half_integer_k(t, x);
      EXPECT_NEAR(bessel_k(t / 2.0, x) / expected, 1.0, 1e-8) << "nu=" << t / 2.0 << " x=" << x;
    }
  }
}

TEST(BesselK, AgreesWithStandardLibraryAndQuadrature) {
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5, 0.3, 3.7}) {
    for (double x = 1e-6; x <= 50; x *= 1.7) {
      const double got = bessel_k(nu, x);
      EXPECT_NEAR(got / std::cyl_bessel_k(nu, x), 1.0, 1e-8) << nu << " " << x;
      if (x > 1e-2) EXPECT_NEAR(got / bessel_k_quadrature(nu, x), 1.0, 1e-8) << nu << " " << x;
    }
  }
}

TEST(BesselK, DecreasingAndDomain) {
  EXPECT_LT(bessel_k(1.0, 2.0), bessel_k(1.0, 1.0));
  EXPECT_THROW(bessel_k(1.0, 0.0), std::domain_error);
  EXPECT_THROW(bessel_k(1.0, -1.0), std::domain_error);
}

TEST(Matern, Examples) {
  const CovarianceSpec reference{1.0, 0.1, 1.0};
  EXPECT_DOUBLE_EQ(matern(0.0, reference), 1.0);
  EXPECT_NEAR(matern(10.0, CovarianceSpec{1.0, 0.1, 0.5}), std::exp(-1.0), 1e-9);
  EXPECT_NEAR(matern(10.0, reference), 0.6019072302, 1e-9);
  EXPECT_NEAR(matern(1.0, reference), 0.1 * std::cyl_bessel_k(1.0, 0.1), 1e-12);
  EXPECT_NEAR(matern(0.0, CovarianceSpec{2.0, 0.3, 1.5}), 4.0, 0);
}

TEST(Matern, ContinuousAtZero) {
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const CovarianceSpec spec{1.3, 0.1, nu};
    EXPECT_LE(std::abs(matern(1e-12, spec) - spec.variance()), 1e-6) << nu;
  }
}

TEST(Matern, NonincreasingInDistance) {
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const CovarianceSpec spec{1.0, 0.1, nu};
    double previous = matern(0.0, spec);
    for (double d = 0.01; d < 400; d += 0.37) {
      const double v = matern(d, spec);
      EXPECT_LE(v, previous + 1e-15) << nu << " " << d;
      previous = v;
    }
  }
}

TEST(Matern, ExponentialCase) {
  const CovarianceSpec spec{1.0, 0.1, 0.5};
  for (double d = 0; d <= 100; d += 0.25) {
    EXPECT_NEAR(matern(d, spec), std::exp(-0.1 * d), 1e-8) << d;
  }
}

TEST(Matern, InvalidSpec) {
  EXPECT_THROW((CovarianceSpec{0.0, 0.1, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((CovarianceSpec{1.0, -0.1, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((CovarianceSpec{1.0, 0.1, 0.0}.validate()), std::invalid_argument);
}

TEST(CirculantBase, Symmetry) {
  const CovarianceSpec spec;
  const auto base = circulant_base(GridShape(8, 8), spec);
  EXPECT_DOUBLE_EQ(base.values(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(base.values(7, 0), base.values(1, 0));
  const GridShape odd(7, 10);
  const auto b2 = circulant_base(odd, spec);
  for (Index r = 0; r < 7; ++r) {
    for (Index c = 0; c < 10; ++c) {
      EXPECT_DOUBLE_EQ(b2.values(r, c), b2.values((7 - r) % 7, (10 - c) % 10));
      EXPECT_DOUBLE_EQ(b2.values(r, c), matern(torus_lag_distance(r, c, odd), spec));
    }
  }
}

TEST(CirculantBase, PositiveAndDecreasingInTorusDistance) {
  const GridShape shape(16, 16);
  const auto base = circulant_base(shape, CovarianceSpec{});
  for (Index a = 0; a < shape.size(); ++a) {
    EXPECT_GT(base.values.data()[a], 0.0);
    for (Index b = 0; b < shape.size(); ++b) {
      const double da = torus_lag_distance(shape.row(a), shape.col(a), shape);
      const double db = torus_lag_distance(shape.row(b), shape.col(b), shape);
      if (da < db) EXPECT_GE(base.values.data()[a], base.values.data()[b]);
    }
  }
}

TEST(Spectrum, WhiteNoiseAndConstant) {
  const GridShape shape(6, 4);
  CirculantBase white{shape, RealField::Zero(6, 4)};
  white.values(0, 0) = 2.5;
  const Spectrum s = base_eigenvalues(white);
  EXPECT_TRUE((s.eigenvalues - 2.5).abs().maxCoeff() < 1e-12);

  CirculantBase constant{shape, RealField::Constant(6, 4, 0.5)};
  const Spectrum c = base_eigenvalues(constant);
  EXPECT_NEAR(c.eigenvalues(0, 0), 24 * 0.5, 1e-12);
  EXPECT_NEAR(c.eigenvalues.sum(), 12.0, 1e-12);
  EXPECT_NEAR(c.eigenvalues.abs().sum(), 12.0, 1e-12);
}

TEST(Spectrum, InverseRecoversBaseAndTracePreserved) {
  const CovarianceSpec spec{1.0, 2.0, 1.5};
  const auto base = circulant_base(GridShape(12, 18), spec);
  const ComplexField raw = raw_eigenvalues(base);
  EXPECT_NEAR(raw.real().mean(), spec.variance(), 1e-12);
  const ComplexField back = ifft2(raw);
  EXPECT_LT((back.real() - base.values).abs().maxCoeff(), 1e-9);
  EXPECT_LT(back.imag().abs().maxCoeff(), 1e-9);
  const Spectrum s = base_eigenvalues(base);
  EXPECT_LE(s.max_imaginary, 1e-9);
  EXPECT_GE(s.eigenvalues.minCoeff(), 0.0);
}

TEST(Spectrum, RoundoffNegativesClamped) {
  CirculantBase base{GridShape(2, 1), RealField(2, 1)};
  base.values << 1.0, 1.0 + 5e-9;  // eigenvalues 2 + 5e-9 and -5e-9
  const Spectrum s = base_eigenvalues(base);
  EXPECT_EQ(s.eigenvalues(1, 0), 0.0);
  EXPECT_LT(s.min_eigenvalue, 0.0);
}

// The long-range default covariance is not nonnegative definite on a 64x64
// torus; the deficit shrinks as the torus grows.
TEST(Spectrum, DefaultCovarianceNeedsALargerTorus) {
  const CovarianceSpec reference;
  EXPECT_THROW(base_eigenvalues(circulant_base(GridShape(64, 64), reference)), EmbeddingError);
  try {
    base_eigenvalues(circulant_base(GridShape(64, 64), reference));
  } catch (const EmbeddingError& e) {
    EXPECT_LT(e.min_eigenvalue(), -1e-8);
  }
  const double m128 = raw_eigenvalues(circulant_base(GridShape(128, 128), reference)).real().minCoeff();
  const double m64 = raw_eigenvalues(circulant_base(GridShape(64, 64), reference)).real().minCoeff();
  EXPECT_GT(m128, m64);
  EXPECT_NO_THROW(base_eigenvalues(circulant_base(GridShape(256, 256), reference)));
  // Short range embeds on 64x64 directly.
  EXPECT_NO_THROW(base_eigenvalues(circulant_base(GridShape(64, 64), CovarianceSpec{1, 1, 1})));
}
