#include "dgum/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "dgum/gum.hpp"
#include "dgum/stats.hpp"

namespace dgum {

std::string to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::fourier: return "fourier";
    case BenchMethod::spectral: return "spectral";
    case BenchMethod::sequential: return "sequential";
    case BenchMethod::chromatic: return "chromatic";
  }
  return "unknown";
}

BenchMethod parse_bench_method(const std::string& name) {
  for (BenchMethod m : {BenchMethod::fourier, BenchMethod::spectral, BenchMethod::sequential,
                        BenchMethod::chromatic}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown benchmark method '" + name + "'");
}

bool is_gibbs(BenchMethod method) {
  return method == BenchMethod::sequential || method == BenchMethod::chromatic;
}

void BenchSettings::validate() const {
  if (reps < 3) throw std::invalid_argument("benchmark needs reps >= 3");
  if (methods.empty()) throw std::invalid_argument("benchmark needs at least one method");
  if (sizes.empty()) throw std::invalid_argument("benchmark needs at least one size");
  for (Index s : sizes) {
    if (s < 1) throw std::invalid_argument("benchmark sizes must be positive");
  }
  if (classes < 2) throw std::invalid_argument("benchmark needs K >= 2");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  covariance.validate();
}

std::optional<SpeedupRow> BenchReport::speedup_at(Index size) const {
  for (const auto& s : speedups) {
    if (s.size == size) return s;
  }
  return std::nullopt;
}

double time_draw(BenchMethod method, Index size, const BenchSettings& settings, Seed seed,
                 int* iterations, bool* converged) {
  const GridShape shape(size, size);
  const ClassSet classes(settings.classes);
  const auto start = std::chrono::steady_clock::now();
  int iters = 1;
  bool done = true;
  if (is_gibbs(method)) {
    PottsSpec potts;
    potts.classes = settings.classes;
    potts.beta = settings.beta;
    potts.system = settings.system;
    const auto schedule =
        method == BenchMethod::chromatic ? GibbsSchedule::chromatic : GibbsSchedule::sequential;
    const GibbsResult result = run_gibbs(shape, potts, seed, settings.max_iters, schedule);
    iters = result.iterations;
    done = result.converged;
  } else {
    MultivariateGmrfSpec spec;
    spec.classes = settings.classes;
    spec.covariances = {settings.covariance};
    spec.method = method == BenchMethod::fourier ? GmrfMethod::fourier : GmrfMethod::spectral;
    spec.bands = settings.bands;
    spec.embedding = settings.embedding;
    const MultivariateSampler sampler(shape, spec);
    const LabelField labels = sample_dgum(sampler, classes, seed);
    (void)labels;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  if (iterations) *iterations = iters;
  if (converged) *converged = done;
  return elapsed.count();
}

BenchReport benchmark(const BenchSettings& settings) {
  settings.validate();
  BenchReport report;
  for (Index size : settings.sizes) {
    const BenchRow* best_gibbs = nullptr;
    const BenchRow* best_dgum = nullptr;
    const std::size_t first = report.rows.size();
    for (BenchMethod method : settings.methods) {
      BenchRow row;
      row.method = method;
      row.size = size;
      row.reps = settings.reps;
      std::vector<double> times;
      double total_iters = 0;
      for (int r = 0; r < settings.reps; ++r) {
        int iters = 0;
        bool converged = true;
        times.push_back(
            time_draw(method, size, settings, replicate_seed(settings.seed, r), &iters, &converged));
        total_iters += iters;
        if (!converged) ++row.nonconverged;
      }
      row.median = quantile(times, 0.5);
      row.q25 = quantile(times, 0.25);
      row.q75 = quantile(times, 0.75);
      row.mean_iterations = total_iters / settings.reps;
      report.rows.push_back(row);
    }
    for (std::size_t i = first; i < report.rows.size(); ++i) {
      const BenchRow& row = report.rows[i];
      const BenchRow*& best = is_gibbs(row.method) ? best_gibbs : best_dgum;
      if (!best || row.median < best->median) best = &row;
    }
    if (best_gibbs && best_dgum) {
      report.speedups.push_back(
          {size, best_gibbs->method, best_dgum->method, best_gibbs->median / best_dgum->median});
    }
  }
  return report;
}

}  // namespace dgum
