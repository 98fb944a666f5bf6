#ifndef DGUM_BENCHMARK_HPP
#define DGUM_BENCHMARK_HPP

#include <optional>
#include <string>
#include <vector>

#include "dgum/covariance.hpp"
#include "dgum/gmrf.hpp"
#include "dgum/lattice.hpp"
#include "dgum/potts.hpp"
#include "dgum/random.hpp"

namespace dgum {

/// fourier and spectral time a full DGUM draw; sequential and chromatic time
/// a Gibbs chain run until its convergence rule fires (or max_iters).
enum class BenchMethod { fourier, spectral, sequential, chromatic };

std::string to_string(BenchMethod method);
/// Throws std::invalid_argument on an unknown name.
BenchMethod parse_bench_method(const std::string& name);
bool is_gibbs(BenchMethod method);

struct BenchSettings {
  std::vector<BenchMethod> methods{BenchMethod::fourier, BenchMethod::spectral,
                                   BenchMethod::chromatic};
  std::vector<Index> sizes{64, 128, 256};  // square grids
  int classes = 2;
  int reps = 10;
  Seed seed{0};
  CovarianceSpec covariance;
  int bands = 5000;
  double beta = 0.5;
  Neighborhood system = Neighborhood::eight;
  int max_iters = kDefaultMaxIters;
  Embedding embedding = Embedding::automatic;

  void validate() const;
};

/// Wall times in seconds. Each repetition includes sampler preparation.
struct BenchRow {
  BenchMethod method{};
  Index size = 0;
  int reps = 0;
  double median = 0;
  double q25 = 0;
  double q75 = 0;
  double mean_iterations = 0;  // Gibbs sweeps; 1 for DGUM
  int nonconverged = 0;
};

/// Fastest Gibbs median over fastest DGUM median at one size.
struct SpeedupRow {
  Index size = 0;
  BenchMethod gibbs{};
  BenchMethod dgum{};
  double ratio = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<SpeedupRow> speedups;

  std::optional<SpeedupRow> speedup_at(Index size) const;
};

/// Times one draw. `iterations` and `converged` report the Gibbs outcome.
double time_draw(BenchMethod method, Index size, const BenchSettings& settings, Seed seed,
                 int* iterations = nullptr, bool* converged = nullptr);

BenchReport benchmark(const BenchSettings& settings);

}  // namespace dgum

#endif  // DGUM_BENCHMARK_HPP
