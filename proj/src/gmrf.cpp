#include "dgum/gmrf.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <variant>

#include <Eigen/Cholesky>

namespace dgum {

namespace {

// Stream tags keep the draws of different samplers apart for one seed.
enum : std::uint64_t { kFourierStream = 1, kSpectralStream = 2, kCholeskyStream = 3 };

Index smooth_size(Index m) {
  if (m <= 1) return 1;
  for (Index n = m;; ++n) {
    Index r = n;
    for (Index f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return n;
  }
}

CirculantEmbedding padded_embedding(const GridShape& window, const CovarianceSpec& spec) {
  spec.validate();
  Index rows = smooth_size(2 * (window.height() - 1));
  Index cols = smooth_size(2 * (window.width() - 1));
  double last_min = 0;
  while (rows * cols <= kMaxEmbeddingSites) {
    const GridShape torus(rows, cols);
    try {
      return {torus, base_eigenvalues(circulant_base(torus, spec))};
    } catch (const EmbeddingError& e) {
      last_min = e.min_eigenvalue();
    }
    if (rows > 1) rows *= 2;
    if (cols > 1) cols *= 2;
  }
  std::ostringstream msg;
  msg << "no circulant embedding within " << kMaxEmbeddingSites << " sites for a "
      << window.height() << "x" << window.width() << " window (kappa=" << spec.kappa
      << ", nu=" << spec.nu << ")";
  throw EmbeddingError(msg.str(), last_min);
}

}  // namespace

CirculantEmbedding embed(const GridShape& window, const CovarianceSpec& spec,
                         Embedding embedding) {
  switch (embedding) {
    case Embedding::periodic:
      return {window, base_eigenvalues(circulant_base(window, spec))};
    case Embedding::automatic:
      try {
        return {window, base_eigenvalues(circulant_base(window, spec))};
      } catch (const EmbeddingError&) {
        return padded_embedding(window, spec);
      }
    case Embedding::padded:
      break;
  }
  return padded_embedding(window, spec);
}

GridShape embedding_torus(const GridShape& window, const CovarianceSpec& spec) {
  return padded_embedding(window, spec).torus;
}

FourierSampler::FourierSampler(const GridShape& window, const CovarianceSpec& spec,
                               Embedding embedding)
    : FourierSampler(window, embed(window, spec, embedding)) {}

FourierSampler::FourierSampler(const GridShape& window, CirculantEmbedding embedding)
    : window_(window),
      torus_(embedding.torus),
      spectrum_(std::move(embedding.spectrum)),
      amplitude_(spectrum_.eigenvalues.sqrt()) {}

std::pair<RealField, RealField> FourierSampler::sample_pair(Seed seed) const {
  const Index rows = torus_.height();
  const Index cols = torus_.width();
  CounterEngine engine(derive_key(seed.value, {kFourierStream}));
  std::normal_distribution<double> normal;

  ComplexField noise(rows, cols);
  for (Index s = 0; s < noise.size(); ++s) {
    const double re = normal(engine);
    const double im = normal(engine);
    noise.data()[s] = amplitude_.data()[s] * std::complex<double>(re, im);
  }
  fft2(noise, /*inverse=*/true);

  const double scale = std::sqrt(static_cast<double>(torus_.size()));
  const auto window = noise.topLeftCorner(window_.height(), window_.width());
  return {scale * window.real(), scale * window.imag()};
}

RealField FourierSampler::sample(Seed seed) const { return sample_pair(seed).first; }

SpectralSampler::SpectralSampler(const GridShape& shape, const CovarianceSpec& spec,
                                 int bands)
    : shape_(shape), spec_(spec), bands_(bands) {
  spec.validate();
  if (bands < 1) throw std::invalid_argument("spectral sampler needs at least one band");
}

SpectralSampler::Band SpectralSampler::band(Seed seed, int i) const {
  // Per-band substreams make each band independent of evaluation order.
  CounterEngine engine(derive_key(seed.value, {kSpectralStream, static_cast<std::uint64_t>(i)}));
  // Shape nu, rate kappa^2 / 2 (std::gamma_distribution takes the scale).
  std::gamma_distribution<double> gamma(spec_.nu, 2.0 / (spec_.kappa * spec_.kappa));
  std::normal_distribution<double> normal;
  const double g = gamma(engine);
  const double xi = 1.0 / (2.0 * g);
  const double sd = std::sqrt(2.0 * xi);
  Band out;
  out.eta_row = sd * normal(engine);
  out.eta_col = sd * normal(engine);
  out.phase = 2.0 * std::numbers::pi * engine.uniform();
  return out;
}

RealField SpectralSampler::sample(Seed seed) const {
  const Index rows = shape_.height();
  const Index cols = shape_.width();
  const Index p = bands_;

  // cos(a r + b c + u) = cos(a r) cos(b c + u) - sin(a r) sin(b c + u), so the
  // band sum is one (rows x 2p) * (2p x cols) product.
  Eigen::MatrixXd left(rows, 2 * p);
  Eigen::MatrixXd right(2 * p, cols);
  for (Index i = 0; i < p; ++i) {
    const Band b = band(seed, static_cast<int>(i));
    for (Index r = 0; r < rows; ++r) {
      const double angle = b.eta_row * static_cast<double>(r);
      left(r, i) = std::cos(angle);
      left(r, p + i) = -std::sin(angle);
    }
    for (Index c = 0; c < cols; ++c) {
      const double angle = b.eta_col * static_cast<double>(c) + b.phase;
      right(i, c) = std::cos(angle);
      right(p + i, c) = std::sin(angle);
    }
  }
  const double scale = spec_.sigma * std::sqrt(2.0 / static_cast<double>(p));
  RealField out = (scale * (left * right)).array();
  return out;
}

Eigen::MatrixXd dense_covariance(const GridShape& shape, const CovarianceSpec& spec,
                                 DistanceMetric metric) {
  spec.validate();
  const Index n = shape.size();
  Eigen::MatrixXd cov(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b <= a; ++b) {
      double d;
      if (metric == DistanceMetric::plane) {
        d = plane_distance(a, b, shape);
      } else {
        const Index dr = (shape.row(a) - shape.row(b) + shape.height()) % shape.height();
        const Index dc = (shape.col(a) - shape.col(b) + shape.width()) % shape.width();
        d = torus_lag_distance(dr, dc, shape);
      }
      cov(a, b) = cov(b, a) = matern(d, spec);
    }
  }
  return cov;
}

CholeskySampler::CholeskySampler(const GridShape& shape, const CovarianceSpec& spec,
                                 DistanceMetric metric)
    : shape_(shape) {
  if (shape.size() > kMaxCholeskySites) {
    throw CapacityError("dense Cholesky sampler limited to " +
                        std::to_string(kMaxCholeskySites) + " sites, got " +
                        std::to_string(shape.size()));
  }
  covariance_ = dense_covariance(shape, spec, metric);
  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("covariance matrix is not positive definite");
  }
  factor_ = llt.matrixL();
}

RealField CholeskySampler::sample(Seed seed) const {
  CounterEngine engine(derive_key(seed.value, {kCholeskyStream}));
  std::normal_distribution<double> normal;
  Eigen::VectorXd white(shape_.size());
  for (Index i = 0; i < white.size(); ++i) white(i) = normal(engine);
  const Eigen::VectorXd z = factor_.triangularView<Eigen::Lower>() * white;
  return Eigen::Map<const RealField>(z.data(), shape_.height(), shape_.width());
}

RealField sample_fourier(const GridShape& shape, const CovarianceSpec& spec, Seed seed,
                         Embedding embedding) {
  return FourierSampler(shape, spec, embedding).sample(seed);
}

RealField sample_spectral(const GridShape& shape, const CovarianceSpec& spec, int bands,
                          Seed seed) {
  return SpectralSampler(shape, spec, bands).sample(seed);
}

RealField sample_cholesky(const GridShape& shape, const CovarianceSpec& spec, Seed seed,
                          DistanceMetric metric) {
  return CholeskySampler(shape, spec, metric).sample(seed);
}

void MultivariateGmrfSpec::validate() const {
  if (classes < 2) throw std::invalid_argument("need at least two classes");
  if (!means.empty() && static_cast<int>(means.size()) != components()) {
    throw std::invalid_argument("expected " + std::to_string(components()) +
                                " component means, got " + std::to_string(means.size()));
  }
  if (covariances.size() != 1 && static_cast<int>(covariances.size()) != components()) {
    throw std::invalid_argument("expected 1 or " + std::to_string(components()) +
                                " covariance specs, got " +
                                std::to_string(covariances.size()));
  }
  for (const auto& c : covariances) c.validate();
  if (method == GmrfMethod::spectral && bands < 1) {
    throw std::invalid_argument("spectral method needs bands >= 1");
  }
}

Seed component_seed(Seed seed, int component) {
  return Seed{derive_key(seed.value, {static_cast<std::uint64_t>(component)})};
}

struct MultivariateSampler::Component {
  std::variant<FourierSampler, SpectralSampler, CholeskySampler> sampler;

  RealField sample(Seed seed) const {
    return std::visit([&](const auto& s) { return s.sample(seed); }, sampler);
  }
};

MultivariateSampler::MultivariateSampler(const GridShape& shape, MultivariateGmrfSpec spec)
    : shape_(shape), spec_(std::move(spec)) {
  spec_.validate();
  auto make = [&](const CovarianceSpec& cov) -> std::shared_ptr<const Component> {
    switch (spec_.method) {
      case GmrfMethod::fourier:
        return std::make_shared<Component>(
            Component{FourierSampler(shape_, cov, spec_.embedding)});
      case GmrfMethod::spectral:
        return std::make_shared<Component>(Component{SpectralSampler(shape_, cov, spec_.bands)});
      case GmrfMethod::cholesky:
        return std::make_shared<Component>(
            Component{CholeskySampler(shape_, cov, spec_.cholesky_metric)});
    }
    throw std::invalid_argument("unknown GMRF method");
  };
  if (spec_.covariances.size() == 1) {
    components_.assign(spec_.components(), make(spec_.covariances.front()));
  } else {
    for (int k = 0; k < spec_.components(); ++k) components_.push_back(make(spec_.covariance(k)));
  }
}

MultivariateSampler::~MultivariateSampler() = default;
MultivariateSampler::MultivariateSampler(MultivariateSampler&&) noexcept = default;
MultivariateSampler& MultivariateSampler::operator=(MultivariateSampler&&) noexcept = default;

RealField MultivariateSampler::sample_component(int k, Seed seed) const {
  RealField z = components_[k]->sample(component_seed(seed, k));
  if (spec_.mean(k) != 0.0) z += spec_.mean(k);
  return z;
}

RealFieldStack MultivariateSampler::sample(Seed seed) const {
  const int count = spec_.components();
  RealFieldStack out(count);
#pragma omp parallel for schedule(static) if (count > 1)
  for (int k = 0; k < count; ++k) out[k] = sample_component(k, seed);
  return out;
}

RealFieldStack sample_multivariate(const GridShape& shape, const MultivariateGmrfSpec& spec,
                                   Seed seed) {
  return MultivariateSampler(shape, spec).sample(seed);
}

}  // namespace dgum
