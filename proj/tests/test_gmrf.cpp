#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dgum/gmrf.hpp"
#include "dgum/parallel.hpp"

using namespace dgum;

namespace {

const CovarianceSpec kMatern{1.0, 0.1, 1.0};

const std::vector<RealField>& fourier_fields() {
  static const std::vector<RealField> fields = [] {
    const FourierSampler sampler(GridShape(64, 64), kMatern);
    std::vector<RealField> out;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      auto [a, b] = sampler.sample_pair(Seed{r});
      out.push_back(std::move(a));
      out.push_back(std::move(b));
    }
    return out;
  }();
  return fields;
}

RealField site_variance(const std::vector<RealField>& fields) {
  RealField acc = RealField::Zero(fields[0].rows(), fields[0].cols());
  for (const auto& f : fields) acc += f.square();
  return acc / static_cast<double>(fields.size());
}

// Relative standard deviation of the site variances across sites.
double relative_spread(const RealField& var) {
  const double m = var.mean();
  return std::sqrt((var - m).square().mean()) / m;
}

// Mean of z(r, c) z(r + dr, c + dc) over in-window pairs and replicates.
double lag_product(const std::vector<RealField>& fields, Index dr, Index dc) {
  double sum = 0;
  Index count = 0;
  for (const auto& f : fields) {
    for (Index r = 0; r + dr < f.rows(); ++r) {
      for (Index c = 0; c + dc < f.cols(); ++c) {
        sum += f(r, c) * f(r + dr, c + dc);
        ++count;
      }
    }
  }
  return sum / static_cast<double>(count);
}

// Kolmogorov-Smirnov statistic of a sample against N(0, 1).
double ks_statistic(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
    d = std::max({d, cdf - i / n, (i + 1) / n - cdf});
  }
  return d;
}

}  // namespace

TEST(Embedding, PaddedTorusSizes) {
  EXPECT_EQ(embedding_torus(GridShape(64, 64), kMatern), GridShape(256, 256));
  EXPECT_EQ(embedding_torus(GridShape(150, 150), kMatern), GridShape(300, 300));
  const GridShape t16 = embedding_torus(GridShape(16, 16), kMatern);
  EXPECT_GE(t16.height(), 30);
  EXPECT_NO_THROW(base_eigenvalues(circulant_base(t16, kMatern)));
}

TEST(Embedding, Modes) {
  EXPECT_THROW(FourierSampler(GridShape(64, 64), kMatern, Embedding::periodic), EmbeddingError);
  EXPECT_EQ(FourierSampler(GridShape(64, 64), kMatern, Embedding::automatic).torus(),
            GridShape(256, 256));
  const CovarianceSpec short_range{1.0, 1.0, 1.0};
  EXPECT_EQ(FourierSampler(GridShape(64, 64), short_range, Embedding::automatic).torus(),
            GridShape(64, 64));
  EXPECT_EQ(FourierSampler(GridShape(64, 64), short_range, Embedding::periodic).torus(),
            GridShape(64, 64));
  // Far beyond any practical torus.
  EXPECT_THROW(embedding_torus(GridShape(64, 64), CovarianceSpec{1.0, 0.0001, 1.0}),
               EmbeddingError);
}

TEST(Fourier, Deterministic) {
  const GridShape shape(20, 33);
  EXPECT_TRUE((sample_fourier(shape, kMatern, Seed{5}) == sample_fourier(shape, kMatern, Seed{5}))
                  .all());
  EXPECT_FALSE((sample_fourier(shape, kMatern, Seed{5}) == sample_fourier(shape, kMatern, Seed{6}))
                   .all());
  const RealField f = sample_fourier(shape, kMatern, Seed{5});
  EXPECT_EQ(f.rows(), 20);
  EXPECT_EQ(f.cols(), 33);
  EXPECT_TRUE(f.isFinite().all());
}

// With R replicates a site variance has standard error sqrt(2 / R), so the
// per-site bound is 5 standard errors and the pooled one is the 10% band.
TEST(Fourier, SiteVarianceAndStationarity) {
  const auto& fields = fourier_fields();
  const RealField var = site_variance(fields);
  const double se = std::sqrt(2.0 / static_cast<double>(fields.size()));
  EXPECT_NEAR(var.mean(), 1.0, 0.1);
  EXPECT_LT((var - 1.0).abs().maxCoeff(), 5 * se);
  EXPECT_LT(relative_spread(var), 0.15);
  // Pure sampling noise: spread no larger than one standard error, give or take.
  EXPECT_LT(relative_spread(var), 1.25 * se);
}

TEST(Fourier, LagOneCovariance) {
  const double target = matern(1.0, kMatern);
  EXPECT_NEAR(target, 0.1 * bessel_k(1.0, 0.1), 1e-12);
  EXPECT_NEAR(lag_product(fourier_fields(), 0, 1), target, 0.03);
  EXPECT_NEAR(lag_product(fourier_fields(), 1, 0), target, 0.03);
}

// A padded window is not periodic: opposite edges are far apart.
TEST(Fourier, PaddedWindowUsesPlaneDistance) {
  const auto& fields = fourier_fields();
  double edge = 0;
  for (const auto& f : fields) edge += (f.col(0) * f.col(63)).mean();
  edge /= static_cast<double>(fields.size());
  EXPECT_NEAR(edge, matern(63.0, kMatern), 0.05);
  EXPECT_LT(edge, 0.2);
}

TEST(Fourier, PeriodicFieldUsesTorusDistance) {
  const CovarianceSpec spec{1.0, 1.0, 1.0};
  const FourierSampler sampler(GridShape(16, 16), spec, Embedding::periodic);
  double edge = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const RealField f = sampler.sample(Seed{static_cast<std::uint64_t>(r)});
    edge += (f.col(0) * f.col(15)).mean();
  }
  EXPECT_NEAR(edge / reps, matern(1.0, spec), 0.05);
}

TEST(Fourier, PairComponentsUncorrelated) {
  const FourierSampler sampler(GridShape(16, 16), kMatern);
  double cross = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const auto [a, b] = sampler.sample_pair(Seed{static_cast<std::uint64_t>(r)});
    cross += a(3, 4) * b(3, 4);
  }
  EXPECT_NEAR(cross / reps, 0.0, 0.1);
}

TEST(Spectral, SingleBandBounded) {
  const CovarianceSpec spec{1.7, 0.1, 1.0};
  const RealField f = sample_spectral(GridShape(30, 40), spec, 1, Seed{3});
  EXPECT_LE(f.abs().maxCoeff(), spec.sigma * std::sqrt(2.0) + 1e-12);
}

TEST(Spectral, Deterministic) {
  const GridShape shape(17, 9);
  EXPECT_TRUE((sample_spectral(shape, kMatern, 300, Seed{1}) ==
               sample_spectral(shape, kMatern, 300, Seed{1}))
                  .all());
  EXPECT_THROW(SpectralSampler(shape, kMatern, 0), std::invalid_argument);
}

// E[cos(eta . h)] over the band distribution must equal C(|h|) / sigma^2.
// This pins the gamma parameter as a rate: a scale of kappa^2/2 misses badly.
TEST(Spectral, BandDistributionReproducesMatern) {
  for (double nu : {0.5, 1.0, 2.0}) {
    const CovarianceSpec spec{1.0, 0.1, nu};
    const SpectralSampler sampler(GridShape(1, 1), spec, 1);
    const int bands = 400000;
    const std::vector<std::pair<double, double>> lags{{1, 0}, {0, 5}, {3, 4}, {12, 9}, {0, 30}};
    std::vector<double> acc(lags.size(), 0.0);
    for (int i = 0; i < bands; ++i) {
      const auto b = sampler.band(Seed{11}, i);
      for (std::size_t j = 0; j < lags.size(); ++j) {
        acc[j] += std::cos(b.eta_row * lags[j].first + b.eta_col * lags[j].second);
      }
    }
    for (std::size_t j = 0; j < lags.size(); ++j) {
      const double d = std::hypot(lags[j].first, lags[j].second);
      EXPECT_NEAR(acc[j] / bands, matern(d, spec), 0.01) << "nu=" << nu << " d=" << d;
    }
  }
}

TEST(Spectral, SiteVariance) {
  const SpectralSampler sampler(GridShape(64, 64), kMatern, 5000);
  std::vector<RealField> fields;
  for (std::uint64_t r = 0; r < 500; ++r) fields.push_back(sampler.sample(Seed{r}));
  const RealField var = site_variance(fields);
  const double se = std::sqrt(2.0 / static_cast<double>(fields.size()));
  EXPECT_NEAR(var.mean(), 1.0, 0.1);
  EXPECT_LT((var - 1.0).abs().maxCoeff(), 5 * se);
  EXPECT_NEAR(lag_product(fields, 0, 1), matern(1.0, kMatern), 0.03);
}

TEST(Cholesky, OneByOne) {
  const CovarianceSpec spec{2.0, 0.1, 1.0};
  const CholeskySampler sampler(GridShape(1, 1), spec);
  std::vector<double> x;
  for (std::uint64_t r = 0; r < 5000; ++r) x.push_back(sampler.sample(Seed{r})(0, 0) / 2.0);
  EXPECT_LT(ks_statistic(x) * std::sqrt(5000.0), 1.628);
}

TEST(Cholesky, Errors) {
  EXPECT_THROW(CholeskySampler(GridShape(65, 65), kMatern), CapacityError);
  // The long-range torus-distance matrix on 16x16 is indefinite.
  EXPECT_THROW(CholeskySampler(GridShape(16, 16), kMatern, DistanceMetric::torus),
               FactorizationError);
  EXPECT_NO_THROW(CholeskySampler(GridShape(16, 16), kMatern, DistanceMetric::plane));
  EXPECT_NO_THROW(CholeskySampler(GridShape(16, 16), CovarianceSpec{1, 1, 1}));
}

TEST(Cholesky, MarginalAndCovariance) {
  const GridShape shape(16, 16);
  const CholeskySampler sampler(shape, kMatern, DistanceMetric::plane);
  const int reps = 5000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(shape.size(), shape.size());
  std::vector<double> site;
  for (int r = 0; r < reps; ++r) {
    const RealField f = sampler.sample(Seed{static_cast<std::uint64_t>(r)});
    const Eigen::Map<const Eigen::VectorXd> v(f.data(), f.size());
    acc.selfadjointView<Eigen::Lower>().rankUpdate(v);
    site.push_back(f(5, 7));
  }
  acc = acc.selfadjointView<Eigen::Lower>();
  acc /= reps;
  EXPECT_LT(ks_statistic(site) * std::sqrt(static_cast<double>(reps)), 1.628);
  const Eigen::MatrixXd& sigma = sampler.covariance();
  EXPECT_LT((acc - sigma).norm() / sigma.norm(), 0.1);
  EXPECT_DOUBLE_EQ(sigma(0, shape.site(3, 4)), matern(5.0, kMatern));
}

TEST(DenseCovariance, Metrics) {
  const GridShape shape(8, 8);
  const auto torus = dense_covariance(shape, kMatern, DistanceMetric::torus);
  const auto plane = dense_covariance(shape, kMatern, DistanceMetric::plane);
  EXPECT_DOUBLE_EQ(torus(0, shape.site(0, 7)), matern(1.0, kMatern));
  EXPECT_DOUBLE_EQ(plane(0, shape.site(0, 7)), matern(7.0, kMatern));
  EXPECT_TRUE(torus.isApprox(torus.transpose()));
}

TEST(Multivariate, ComponentCountAndValidation) {
  MultivariateGmrfSpec spec;
  spec.classes = 2;
  EXPECT_EQ(sample_multivariate(GridShape(8, 8), spec, Seed{1}).size(), 1u);
  spec.classes = 4;
  EXPECT_EQ(sample_multivariate(GridShape(8, 8), spec, Seed{1}).size(), 3u);
  spec.means = {1.0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.means = {};
  spec.covariances = {kMatern, kMatern};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.classes = 1;
  spec.covariances = {kMatern};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.classes = 2;
  spec.method = GmrfMethod::spectral;
  spec.bands = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Multivariate, IndependentComponentsAndMeans) {
  const GridShape shape(16, 16);
  MultivariateGmrfSpec spec;
  spec.classes = 3;
  const MultivariateSampler balanced(shape, spec);
  spec.means = {0.4, 0.0};
  const MultivariateSampler shifted(shape, spec);
  double cross = 0, mean0 = 0, mean1 = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const auto z = balanced.sample(Seed{static_cast<std::uint64_t>(r)});
    cross += z[0](8, 8) * z[1](8, 8);
    const auto w = shifted.sample(Seed{static_cast<std::uint64_t>(r) + 100000});
    mean0 += w[0].mean();
    mean1 += w[1].mean();
  }
  EXPECT_NEAR(cross / reps, 0.0, 0.05);
  EXPECT_NEAR(mean0 / reps, 0.4, 0.05);
  EXPECT_NEAR(mean1 / reps, 0.0, 0.05);
}

TEST(Multivariate, AnisotropicComponents) {
  MultivariateGmrfSpec spec;
  spec.classes = 3;
  spec.covariances = {CovarianceSpec{1.0, 0.1, 1.0}, CovarianceSpec{3.0, 0.1, 1.0}};
  const MultivariateSampler sampler(GridShape(32, 32), spec);
  double v0 = 0, v1 = 0;
  for (std::uint64_t r = 0; r < 300; ++r) {
    const auto z = sampler.sample(Seed{r});
    v0 += z[0].square().mean();
    v1 += z[1].square().mean();
  }
  EXPECT_NEAR(v0 / 300, 1.0, 0.25);
  EXPECT_NEAR(v1 / 300, 9.0, 2.25);
}

TEST(Multivariate, ComponentSeedsMatchSingleSamplers) {
  const GridShape shape(12, 12);
  MultivariateGmrfSpec spec;
  spec.classes = 3;
  spec.method = GmrfMethod::spectral;
  spec.bands = 200;
  const auto z = sample_multivariate(shape, spec, Seed{9});
  EXPECT_TRUE((z[1] == sample_spectral(shape, kMatern, 200, component_seed(Seed{9}, 1))).all());
  EXPECT_FALSE((z[0] == z[1]).all());
}

TEST(Multivariate, ThreadCountDoesNotChangeOutput) {
  const GridShape shape(40, 24);
  for (auto method : {GmrfMethod::fourier, GmrfMethod::spectral, GmrfMethod::cholesky}) {
    MultivariateGmrfSpec spec;
    spec.classes = 4;
    spec.method = method;
    spec.bands = 500;
    spec.cholesky_metric = DistanceMetric::plane;
    set_num_threads(1);
    const auto a = sample_multivariate(shape, spec, Seed{42});
    set_num_threads(4);
    const auto b = sample_multivariate(shape, spec, Seed{42});
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE((a[k] == b[k]).all());
  }
  set_num_threads(1);
}
