#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace sslm {

struct BootstrapCi {
  double low = 0.0;
  double high = 0.0;
  int n_resamples = 0;
};

// Percentile bootstrap over units (participants or items). The statistic
// receives a multiset of unit indices drawn with replacement. Each
// replicate runs on its own RNG stream derived from (seed, replicate), so
// the interval is identical for any worker count. Replicates run in
// parallel.
BootstrapCi bootstrap_ci(int n_units,
                         const std::function<double(const std::vector<int>&)>& statistic,
                         int n_resamples, std::uint64_t seed, double level = 0.95);

// Linear-interpolation quantile of a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace sslm
