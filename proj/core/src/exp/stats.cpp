#include "gwrl/exp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gwrl/env/factory.hpp"
#include "gwrl/env/simple_shapes.hpp"
#include "gwrl/util/rng.hpp"

namespace gwrl::exp {

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double quantile_sorted(std::span<const double> sorted, double q) {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted[0];
  const double pos = q * static_cast<double>(m - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= m) return sorted[m - 1];
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

BootstrapCi bootstrap_ci(std::span<const double> values, double level, int resamples,
                         std::uint64_t seed) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw data::ConfigError("bootstrap_ci: need at least 2 values");
  }

  std::vector<double> means;
  // n^n resamples fit in the budget -> enumerate them all (exact).
  double total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<double>(n);
  if (total <= static_cast<double>(resamples)) {
    const auto count = static_cast<std::size_t>(total);
    means.reserve(count);
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      double sum = 0;
      for (const auto k : idx) sum += values[k];
      means.push_back(sum / static_cast<double>(n));
      std::size_t pos = 0;
      while (pos < n && ++idx[pos] == n) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == n) break;
    }
  } else {
    util::Rng rng(seed);
    means.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
      double sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        sum += values[rng.below(n)];
      }
      means.push_back(sum / static_cast<double>(n));
    }
  }

  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  BootstrapCi ci;
  ci.mean = mean_of(values);
  ci.lo = quantile_sorted(means, alpha);
  ci.hi = quantile_sorted(means, 1.0 - alpha);
  return ci;
}

BaselineResult random_baseline(data::EnvId env, int episodes, std::uint64_t seed) {
  if (episodes < 1000) {
    throw data::ConfigError("random_baseline: needs >= 1000 episodes");
  }
  BaselineResult out;
  out.returns.reserve(static_cast<std::size_t>(episodes));
  util::Rng action_rng(util::mix64(seed ^ 0x72616e64ULL));
  if (env == data::EnvId::simple_shapes) {
    env::ss::SimpleShapesEnv e;
    e.set_render_enabled(false);
    for (int ep = 0; ep < episodes; ++ep) {
      e.reset(util::substream(seed, static_cast<std::uint64_t>(ep)));
      double ret = 0;
      while (true) {
        const auto r = e.step(static_cast<env::ss::Action>(action_rng.uniform_int(0, 5)));
        ret += r.reward;
        if (r.terminated || r.truncated) break;
      }
      out.returns.push_back(ret);
    }
  } else {
    env::fac::FactoryEnv e;
    e.set_render_enabled(false);
    for (int ep = 0; ep < episodes; ++ep) {
      e.reset(util::substream(seed, static_cast<std::uint64_t>(ep)));
      double ret = 0;
      while (true) {
        env::fac::Action a{action_rng.uniform(-1.0, 1.0), action_rng.uniform(-1.0, 1.0)};
        const auto r = e.step(a);
        ret += r.reward;
        if (r.terminated || r.truncated) break;
      }
      out.returns.push_back(ret);
    }
  }
  out.mean = mean_of(out.returns);
  out.ci = bootstrap_ci(out.returns, 0.95, 10000, util::mix64(seed));
  return out;
}

BaselineResult greedy_oracle_baseline(int episodes, std::uint64_t seed) {
  BaselineResult out;
  out.returns.reserve(static_cast<std::size_t>(episodes));
  env::ss::SimpleShapesEnv e;
  e.set_render_enabled(false);
  for (int ep = 0; ep < episodes; ++ep) {
    e.reset(util::substream(seed, static_cast<std::uint64_t>(ep)));
    double ret = 0;
    while (true) {
      const auto r = e.step(env::ss::greedy_action(e.state()));
      ret += r.reward;
      if (r.terminated || r.truncated) break;
    }
    out.returns.push_back(ret);
  }
  out.mean = mean_of(out.returns);
  out.ci = bootstrap_ci(out.returns, 0.95, 10000, util::mix64(seed));
  return out;
}

}  // namespace gwrl::exp
