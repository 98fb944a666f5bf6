#include "dgum/gum.hpp"

#include <algorithm>

namespace dgum {

ClassSet::ClassSet(int classes) {
  if (classes < 2) throw std::invalid_argument("need at least two classes");
  omegas_.resize(classes);
  for (int k = 0; k < classes; ++k) omegas_[k] = k;
}

ClassSet::ClassSet(std::vector<std::int32_t> omegas) : omegas_(std::move(omegas)) {
  if (omegas_.size() < 2) throw std::invalid_argument("need at least two classes");
  if (omegas_.front() < 0) throw std::invalid_argument("class values must be nonnegative");
  for (std::size_t k = 1; k < omegas_.size(); ++k) {
    if (omegas_[k] <= omegas_[k - 1]) {
      throw std::invalid_argument("class values must be strictly increasing");
    }
  }
}

int ClassSet::index_of(std::int32_t omega) const {
  const auto it = std::lower_bound(omegas_.begin(), omegas_.end(), omega);
  if (it == omegas_.end() || *it != omega) return -1;
  return static_cast<int>(it - omegas_.begin());
}

RealField site_uniforms(const GridShape& shape, Seed seed) {
  RealField out(shape.height(), shape.width());
  const std::uint64_t key = derive_key(seed.value, {0x70692d6c6162ULL});
  for (Index s = 0; s < out.size(); ++s) {
    out.data()[s] = to_unit(mix64(key ^ mix64(static_cast<std::uint64_t>(s))));
  }
  return out;
}

LabelField sample_dgum(const MultivariateSampler& sampler, const ClassSet& classes, Seed seed) {
  if (sampler.spec().classes != classes.size()) {
    throw std::invalid_argument("class set size does not match the GMRF spec");
  }
  return dgum_field(sampler.sample(seed), classes);
}

LabelField sample_dgum(const GridShape& shape, const MultivariateGmrfSpec& spec,
                       const ClassSet& classes, Seed seed) {
  return sample_dgum(MultivariateSampler(shape, spec), classes, seed);
}

}  // namespace dgum
