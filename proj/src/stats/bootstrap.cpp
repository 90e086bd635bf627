#include "sslm/stats/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "sslm/util/errors.hpp"
#include "sslm/util/rng.hpp"

namespace sslm {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DataError("quantile: empty sample");
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

BootstrapCi bootstrap_ci(int n_units,
                         const std::function<double(const std::vector<int>&)>& statistic,
                         int n_resamples, std::uint64_t seed, double level) {
  if (n_units < 2) throw DataError("bootstrap_ci: need at least 2 units");
  if (n_resamples < 1000)
    throw DataError("bootstrap_ci: need at least 1000 resamples");

  std::vector<double> stats(n_resamples);
#pragma omp parallel for schedule(static)
  for (int rep = 0; rep < n_resamples; ++rep) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(rep)));
    std::vector<int> draw(n_units);
    for (int i = 0; i < n_units; ++i)
      draw[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_units)));
    stats[rep] = statistic(draw);
  }

  std::sort(stats.begin(), stats.end());
  double alpha = (1.0 - level) / 2.0;
  BootstrapCi ci;
  ci.low = quantile_sorted(stats, alpha);
  ci.high = quantile_sorted(stats, 1.0 - alpha);
  ci.n_resamples = n_resamples;
  return ci;
}

}  // namespace sslm
