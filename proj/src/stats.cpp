#include "dgum/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "dgum/fft.hpp"

namespace dgum {

Eigen::VectorXd class_frequencies(const LabelField& labels, const ClassSet& classes) {
  std::vector<Index> counts(classes.size(), 0);
  for (Index s = 0; s < labels.size(); ++s) {
    const int k = classes.index_of(labels.data()[s]);
    if (k < 0) {
      throw DataError("label " + std::to_string(labels.data()[s]) + " at site " +
                      std::to_string(s) + " is not in the class set");
    }
    ++counts[k];
  }
  Eigen::VectorXd out(classes.size());
  for (int k = 0; k < classes.size(); ++k) {
    out(k) = static_cast<double>(counts[k]) / static_cast<double>(labels.size());
  }
  return out;
}

BalanceReport balance_report(std::span<const LabelField> fields, const ClassSet& classes) {
  if (fields.size() < 2) throw DataError("balance report needs at least two replicates");
  const GridShape shape = shape_of(fields.front());
  const int replicates = static_cast<int>(fields.size());

  Eigen::MatrixXd freq(classes.size(), replicates);
  for (int r = 0; r < replicates; ++r) {
    if (!(shape_of(fields[r]) == shape)) throw DataError("replicate shapes differ");
    freq.col(r) = class_frequencies(fields[r], classes);
  }
  BalanceReport out;
  out.replicates = replicates;
  out.mean_frequencies = freq.rowwise().mean();
  out.bias = std::abs(out.mean_frequencies(0) - 1.0 / classes.size());
  const Eigen::ArrayXd f0 = freq.row(0).transpose().array();
  out.std_dev = std::sqrt((f0 - f0.mean()).square().sum() / (replicates - 1));
  return out;
}

namespace {

struct Offset {
  Index dr;
  Index dc;
  Index pairs;
};

std::vector<Offset> offsets_at(Index d, const GridShape& shape) {
  std::vector<Offset> out;
  const double lo = static_cast<double>(d) - 0.5;
  const double hi = static_cast<double>(d) + 0.5;
  for (Index dr = -d; dr <= d; ++dr) {
    for (Index dc = -d; dc <= d; ++dc) {
      const double norm = std::sqrt(static_cast<double>(dr * dr + dc * dc));
      if (norm < lo || norm >= hi) continue;
      const Index rows = shape.height() - std::abs(dr);
      const Index cols = shape.width() - std::abs(dc);
      if (rows > 0 && cols > 0) out.push_back({dr, dc, rows * cols});
    }
  }
  return out;
}

}  // namespace

SimilarityCurve pairwise_similarity(const LabelField& labels, double d_max, int bins,
                                    Index pair_budget, Seed seed) {
  if (!(d_max > 0) || bins < 1 || pair_budget < 1) {
    throw std::invalid_argument("pairwise_similarity needs d_max > 0, bins >= 1, budget >= 1");
  }
  const GridShape shape = shape_of(labels);
  std::vector<Index> centers;
  for (int k = 1; k <= bins; ++k) {
    const Index d = std::llround(k * d_max / bins);
    if (d >= 1 && (centers.empty() || centers.back() != d)) centers.push_back(d);
  }

  SimilarityCurve out;
  for (std::size_t b = 0; b < centers.size(); ++b) {
    const std::vector<Offset> offsets = offsets_at(centers[b], shape);
    Index total = 0;
    for (const auto& o : offsets) total += o.pairs;
    if (total == 0) continue;

    Index same = 0;
    Index used = 0;
    auto visit = [&](Index r, Index c, const Offset& o) {
      const Index r0 = o.dr < 0 ? r - o.dr : r;
      const Index c0 = o.dc < 0 ? c - o.dc : c;
      same += labels(r0, c0) == labels(r0 + o.dr, c0 + o.dc);
      ++used;
    };

    if (total <= pair_budget) {
      for (const auto& o : offsets) {
        const Index rows = shape.height() - std::abs(o.dr);
        const Index cols = shape.width() - std::abs(o.dc);
        for (Index r = 0; r < rows; ++r) {
          for (Index c = 0; c < cols; ++c) visit(r, c, o);
        }
      }
    } else {
      // Offset chosen in proportion to its pair count, then a uniform
      // placement: uniform over all valid pairs.
      std::vector<Index> cumulative;
      Index running = 0;
      for (const auto& o : offsets) cumulative.push_back(running += o.pairs);
      CounterEngine engine(derive_key(seed.value, {static_cast<std::uint64_t>(centers[b])}));
      for (Index i = 0; i < pair_budget; ++i) {
        const Index pick = static_cast<Index>(engine.uniform() * static_cast<double>(total));
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        const Offset& o = offsets[it - cumulative.begin()];
        const Index within = pick - (it == cumulative.begin() ? 0 : *(it - 1));
        const Index cols = shape.width() - std::abs(o.dc);
        visit(within / cols, within % cols, o);
      }
    }
    out.distance.push_back(static_cast<double>(centers[b]));
    out.estimate.push_back(static_cast<double>(same) / static_cast<double>(used));
    out.pairs.push_back(used);
  }
  return out;
}

double neighbor_agreement(const LabelField& labels, Neighborhood system) {
  const GridShape shape = shape_of(labels);
  const int count = neighbor_count(system);
  Index same = 0;
  for (Index s = 0; s < shape.size(); ++s) {
    const std::int32_t x = labels.data()[s];
    for (int k = 0; k < count; ++k) same += labels.data()[neighbor_unchecked(shape, s, k)] == x;
  }
  return static_cast<double>(same) / static_cast<double>(shape.size() * count);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

CurvePoint summarize(double x, const std::vector<double>& values) {
  CurvePoint p;
  p.x = x;
  double sum = 0;
  for (double v : values) sum += v;
  p.mean = sum / static_cast<double>(values.size());
  p.q10 = quantile(values, 0.1);
  p.q90 = quantile(values, 0.9);
  return p;
}

Seed replicate_seed(Seed seed, int replicate) {
  return Seed{derive_key(seed.value, {0x7265706cULL, static_cast<std::uint64_t>(replicate)})};
}

std::vector<CurvePoint> phase_curve_pi(std::span<const double> c_values, const GridShape& shape,
                                       const MultivariateGmrfSpec& base_spec, int replicates,
                                       Seed seed, Neighborhood system) {
  if (replicates < 2) throw DataError("phase curve needs at least two replicates");
  const MultivariateSampler sampler(shape, base_spec);
  const ClassSet classes(base_spec.classes);
  const auto nc = static_cast<Index>(c_values.size());
  Eigen::MatrixXd agreement(nc, replicates);

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < replicates; ++r) {
    const Seed rs = replicate_seed(seed, r);
    const RealFieldStack z = sampler.sample(rs);
    for (Index j = 0; j < nc; ++j) {
      const Seed label_seed{derive_key(rs.value, {static_cast<std::uint64_t>(j)})};
      const LabelField x = sample_labels_from_pi(z, c_values[j], classes, label_seed);
      agreement(j, r) = neighbor_agreement(x, system);
    }
  }

  std::vector<CurvePoint> out;
  for (Index j = 0; j < nc; ++j) {
    const Eigen::VectorXd row = agreement.row(j).transpose();
    out.push_back(summarize(c_values[j], {row.data(), row.data() + row.size()}));
  }
  return out;
}

std::vector<KappaCurvePoint> phase_curve_kappa(std::span<const double> kappa_values,
                                               std::span<const int> class_counts,
                                               const GridShape& shape,
                                               const MultivariateGmrfSpec& base_spec,
                                               int replicates, Seed seed,
                                               Neighborhood system) {
  if (replicates < 2) throw DataError("phase curve needs at least two replicates");
  std::vector<KappaCurvePoint> out;
  for (int classes : class_counts) {
    for (double kappa : kappa_values) {
      MultivariateGmrfSpec spec = base_spec;
      spec.classes = classes;
      spec.means.clear();
      CovarianceSpec cov = base_spec.covariance(0);
      cov.kappa = kappa;
      spec.covariances = {cov};
      const MultivariateSampler sampler(shape, spec);
      const ClassSet set(classes);

      std::vector<double> values(replicates);
#pragma omp parallel for schedule(dynamic)
      for (int r = 0; r < replicates; ++r) {
        values[r] = neighbor_agreement(sample_dgum(sampler, set, replicate_seed(seed, r)), system);
      }
      out.push_back({classes, summarize(kappa, values)});
    }
  }
  return out;
}

namespace {

Index padded_size(Index m) {
  for (Index n = m;; ++n) {
    Index r = n;
    for (Index f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return n;
  }
}

}  // namespace

std::vector<CovarianceEntry> empirical_covariance(std::span<const RealField> fields,
                                                  Index max_lag, LagDomain domain) {
  if (fields.size() < 2) throw DataError("covariance estimate needs at least two replicates");
  const GridShape shape = shape_of(fields.front());
  const Index h = shape.height();
  const Index w = shape.width();
  if (max_lag < 0 || max_lag >= h || max_lag >= w) {
    throw DataError("max_lag must be smaller than both grid dimensions");
  }

  // Autocorrelations through |DFT|^2, summed over replicates. Plane lags
  // need zero padding so that shifted copies do not wrap.
  const Index rows = domain == LagDomain::torus ? h : padded_size(h + max_lag);
  const Index cols = domain == LagDomain::torus ? w : padded_size(w + max_lag);
  RealField power = RealField::Zero(rows, cols);
  ComplexField buffer(rows, cols);
  for (const auto& f : fields) {
    if (!(shape_of(f) == shape)) throw DataError("replicate shapes differ");
    buffer.setZero();
    buffer.topLeftCorner(h, w) = f.cast<std::complex<double>>();
    fft2(buffer);
    power += buffer.abs2();
  }
  buffer = power.cast<std::complex<double>>();
  fft2(buffer, /*inverse=*/true);

  const double replicates = static_cast<double>(fields.size());
  std::vector<CovarianceEntry> out;
  for (Index dr = 0; dr <= max_lag; ++dr) {
    for (Index dc = -max_lag; dc <= max_lag; ++dc) {
      if (dr == 0 && dc < 0) continue;
      CovarianceEntry e;
      e.dr = dr;
      e.dc = dc;
      if (domain == LagDomain::torus) {
        e.pairs = h * w;
        e.distance = torus_lag_distance(dr, (dc + w) % w, shape);
      } else {
        e.pairs = (h - dr) * (w - std::abs(dc));
        e.distance = std::sqrt(static_cast<double>(dr * dr + dc * dc));
      }
      const double sum = buffer(dr, (dc + cols) % cols).real();
      e.value = sum / (replicates * static_cast<double>(e.pairs));
      out.push_back(e);
    }
  }
  return out;
}

std::vector<CovarianceBin> bin_by_distance(const std::vector<CovarianceEntry>& entries,
                                           double d_max,
                                           const std::function<double(double)>& target) {
  struct Accumulator {
    double weight = 0;
    double empirical = 0;
    double target = 0;
    Index lags = 0;
  };
  std::map<Index, Accumulator> bins;
  for (const auto& e : entries) {
    const Index center = std::llround(e.distance);
    if (static_cast<double>(center) > d_max) continue;
    auto& acc = bins[center];
    const double wgt = static_cast<double>(e.pairs);
    acc.weight += wgt;
    acc.empirical += wgt * e.value;
    acc.target += wgt * target(e.distance);
    ++acc.lags;
  }
  std::vector<CovarianceBin> out;
  for (const auto& [center, acc] : bins) {
    out.push_back({static_cast<double>(center), acc.empirical / acc.weight,
                   acc.target / acc.weight, acc.lags});
  }
  return out;
}

Eigen::MatrixXd empirical_covariance_matrix(std::span<const RealField> fields) {
  if (fields.size() < 2) throw DataError("covariance estimate needs at least two replicates");
  const Index n = fields.front().size();
  Eigen::MatrixXd samples(n, static_cast<Index>(fields.size()));
  for (std::size_t r = 0; r < fields.size(); ++r) {
    if (fields[r].size() != n) throw DataError("replicate shapes differ");
    samples.col(static_cast<Index>(r)) = Eigen::Map<const Eigen::VectorXd>(fields[r].data(), n);
  }
  return samples * samples.transpose() / static_cast<double>(fields.size());
}

}  // namespace dgum
