#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gwrl/data/dataset.hpp"

namespace gwrl::exp {

struct BootstrapCi {
  double mean = 0;
  double lo = 0;
  double hi = 0;
};

// Percentile bootstrap over the given values. When n^n <= resamples the
// resample distribution is enumerated exhaustively (exact, seed-independent);
// otherwise `resamples` draws are taken. Throws ConfigError for fewer than
// two values.
BootstrapCi bootstrap_ci(std::span<const double> values, double level = 0.95,
                         int resamples = 10000, std::uint64_t seed = 0);

// Linear-interpolation quantile of a sorted vector, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

double mean_of(std::span<const double> values);

struct BaselineResult {
  double mean = 0;
  BootstrapCi ci;                 // over per-episode returns
  std::vector<double> returns;    // one entry per episode
};

// Mean episode return of uniform-random actions. episodes >= 1000 per the
// measurement contract.
BaselineResult random_baseline(data::EnvId env, int episodes, std::uint64_t seed);

// Mean episode return of the one-step-lookahead controller on Simple Shapes
// (the analytic upper baseline for policy learning).
BaselineResult greedy_oracle_baseline(int episodes, std::uint64_t seed);

}  // namespace gwrl::exp
