#ifndef DGUM_GUM_HPP
#define DGUM_GUM_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dgum/gmrf.hpp"
#include "dgum/lattice.hpp"
#include "dgum/random.hpp"

namespace dgum {

/// Vertices of the unit P-simplex, one per column (P rows, P+1 columns).
/// Column k is bound to class omega_k.
template <typename Scalar = double>
using SimplexVertices = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Regular simplex inscribed in the unit sphere of R^P:
///   v_j = sqrt((P+1)/P) e_j - (sqrt(P+1) - 1) / (P sqrt(P)) 1,   j < P
///   v_P = -1/sqrt(P) 1
template <typename Scalar = double>
SimplexVertices<Scalar> simplex_vertices(int dimension) {
  if (dimension < 1) {
    throw std::invalid_argument("simplex dimension must be >= 1, got " +
                                std::to_string(dimension));
  }
  using std::sqrt;
  const Scalar p = static_cast<Scalar>(dimension);
  const Scalar scale = sqrt((p + 1) / p);
  const Scalar shift = (sqrt(p + 1) - 1) / (p * sqrt(p));
  SimplexVertices<Scalar> v(dimension, dimension + 1);
  v.leftCols(dimension).setConstant(-shift);
  v.leftCols(dimension).diagonal().array() += scale;
  v.col(dimension).setConstant(Scalar(-1) / sqrt(p));
  return v;
}

/// Ordered class values omega_0 < ... < omega_{K-1}, all nonnegative.
class ClassSet {
 public:
  /// The default set {0, ..., K-1}.
  explicit ClassSet(int classes);
  explicit ClassSet(std::vector<std::int32_t> omegas);

  int size() const { return static_cast<int>(omegas_.size()); }
  std::int32_t operator[](int k) const { return omegas_[k]; }
  const std::vector<std::int32_t>& values() const { return omegas_; }
  /// Class index of `omega`, or -1 if it is not in the set.
  int index_of(std::int32_t omega) const;

 private:
  std::vector<std::int32_t> omegas_;
};

/// K probability fields, pi_0 .. pi_{K-1}.
template <typename Scalar = double>
using SoftStack = std::vector<Field<Scalar>>;

namespace detail {

template <typename Scalar>
void check_stack(const std::vector<Field<Scalar>>& z, const SimplexVertices<Scalar>& vertices) {
  if (z.empty()) throw std::invalid_argument("empty field stack");
  if (static_cast<Index>(z.size()) != vertices.rows()) {
    throw std::invalid_argument("stack has " + std::to_string(z.size()) +
                                " components, simplex dimension is " +
                                std::to_string(vertices.rows()));
  }
  for (const auto& f : z) {
    if (f.rows() != z.front().rows() || f.cols() != z.front().cols()) {
      throw std::invalid_argument("stack components differ in shape");
    }
  }
}

template <typename Scalar>
void check_bandwidth(Scalar c) {
  if (!(c > 0)) throw std::invalid_argument("bandwidth c must be positive");
}

/// Squared distances from the point at `site` to every vertex.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> squared_distances(
    const std::vector<Field<Scalar>>& z, const SimplexVertices<Scalar>& vertices, Index site) {
  const Index dim = vertices.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> point(dim);
  for (Index k = 0; k < dim; ++k) point(k) = z[k].data()[site];
  return (vertices.colwise() - point).colwise().squaredNorm().transpose();
}

/// Softmax of -d2 / c^2 with the maximum subtracted.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> soft_assignment(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& d2, Scalar c) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> logits = -d2 / (c * c);
  logits.array() -= logits.maxCoeff();
  logits = logits.array().exp();
  return logits / logits.sum();
}

}  // namespace detail

/// pi_i(z_s) = exp(-|z_s - v_i|^2 / c^2) / sum_k exp(-|z_s - v_k|^2 / c^2).
template <typename Scalar>
SoftStack<Scalar> pi_map(const std::vector<Field<Scalar>>& z, Scalar c,
                         const SimplexVertices<Scalar>& vertices) {
  detail::check_bandwidth(c);
  detail::check_stack(z, vertices);
  const Index classes = vertices.cols();
  SoftStack<Scalar> out(classes, Field<Scalar>(z.front().rows(), z.front().cols()));
  const Index n = z.front().size();
#pragma omp parallel for schedule(static)
  for (Index s = 0; s < n; ++s) {
    const auto pi = detail::soft_assignment(detail::squared_distances(z, vertices, s), c);
    for (Index k = 0; k < classes; ++k) out[k].data()[s] = pi(k);
  }
  return out;
}

/// GUM field: sum_i omega_i pi_i(z_s).
template <typename Scalar>
Field<Scalar> gum_field(const std::vector<Field<Scalar>>& z, Scalar c, const ClassSet& classes) {
  const auto vertices = simplex_vertices<Scalar>(classes.size() - 1);
  const SoftStack<Scalar> pi = pi_map(z, c, vertices);
  Field<Scalar> out = Field<Scalar>::Zero(z.front().rows(), z.front().cols());
  for (int k = 0; k < classes.size(); ++k) out += static_cast<Scalar>(classes[k]) * pi[k];
  return out;
}

/// Class index of the nearest vertex at every site; ties go to the smaller index.
template <typename Scalar>
Field<std::int32_t> nearest_vertex(const std::vector<Field<Scalar>>& z,
                                   const SimplexVertices<Scalar>& vertices) {
  detail::check_stack(z, vertices);
  Field<std::int32_t> out(z.front().rows(), z.front().cols());
  const Index n = z.front().size();
#pragma omp parallel for schedule(static)
  for (Index s = 0; s < n; ++s) {
    const auto d2 = detail::squared_distances(z, vertices, s);
    Index best = 0;
    for (Index k = 1; k < d2.size(); ++k) {
      if (d2(k) < d2(best)) best = k;
    }
    out.data()[s] = static_cast<std::int32_t>(best);
  }
  return out;
}

/// DGUM labels: omega of the nearest simplex vertex.
template <typename Scalar>
LabelField dgum_field(const std::vector<Field<Scalar>>& z, const ClassSet& classes) {
  if (static_cast<int>(z.size()) != classes.size() - 1) {
    throw std::invalid_argument("DGUM with K classes needs K-1 components");
  }
  LabelField labels = nearest_vertex(z, simplex_vertices<Scalar>(classes.size() - 1));
  for (Index s = 0; s < labels.size(); ++s) labels.data()[s] = classes[labels.data()[s]];
  return labels;
}

/// Independent categorical draw at each site from pi(z_s), driven by the
/// given uniforms in [0, 1).
template <typename Scalar>
LabelField sample_labels_from_pi(const std::vector<Field<Scalar>>& z, Scalar c,
                                 const ClassSet& classes, const RealField& uniforms) {
  const auto vertices = simplex_vertices<Scalar>(classes.size() - 1);
  detail::check_bandwidth(c);
  detail::check_stack(z, vertices);
  if (uniforms.rows() != z.front().rows() || uniforms.cols() != z.front().cols()) {
    throw std::invalid_argument("uniform field shape mismatch");
  }
  LabelField out(z.front().rows(), z.front().cols());
  const Index n = out.size();
#pragma omp parallel for schedule(static)
  for (Index s = 0; s < n; ++s) {
    const auto pi = detail::soft_assignment(detail::squared_distances(z, vertices, s), c);
    const double u = uniforms.data()[s];
    int k = 0;
    double cumulative = static_cast<double>(pi(0));
    while (k + 1 < classes.size() && u >= cumulative) cumulative += static_cast<double>(pi(++k));
    out.data()[s] = classes[k];
  }
  return out;
}

/// Per-site uniforms keyed by (seed, site).
RealField site_uniforms(const GridShape& shape, Seed seed);

template <typename Scalar>
LabelField sample_labels_from_pi(const std::vector<Field<Scalar>>& z, Scalar c,
                                 const ClassSet& classes, Seed seed) {
  if (z.empty()) throw std::invalid_argument("empty field stack");
  return sample_labels_from_pi(z, c, classes, site_uniforms(shape_of(z.front()), seed));
}

/// GMRF stack followed by the DGUM mapping.
LabelField sample_dgum(const GridShape& shape, const MultivariateGmrfSpec& spec,
                       const ClassSet& classes, Seed seed);

/// Same, reusing a prepared sampler.
LabelField sample_dgum(const MultivariateSampler& sampler, const ClassSet& classes, Seed seed);

}  // namespace dgum

#endif  // DGUM_GUM_HPP
