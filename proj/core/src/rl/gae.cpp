#include "gwrl/rl/gae.hpp"

#include <cmath>
#include <stdexcept>

namespace gwrl::rl {

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> terminated, std::span<const std::uint8_t> truncated,
                 std::span<const double> trunc_next_values, double bootstrap_value, double gamma,
                 double lam, std::span<double> out_advantages, std::span<double> out_returns) {
  const std::size_t t_count = rewards.size();
  if (values.size() != t_count || terminated.size() != t_count || truncated.size() != t_count ||
      trunc_next_values.size() != t_count || out_advantages.size() != t_count ||
      out_returns.size() != t_count) {
    throw std::invalid_argument("compute_gae: span length mismatch");
  }
  double carry = 0.0;
  for (std::size_t i = t_count; i-- > 0;) {
    double next_value;
    if (terminated[i]) {
      next_value = 0.0;
    } else if (truncated[i]) {
      next_value = trunc_next_values[i];
    } else {
      next_value = (i + 1 < t_count) ? values[i + 1] : bootstrap_value;
    }
    const bool boundary = terminated[i] || truncated[i];
    const double delta = rewards[i] + gamma * next_value - values[i];
    carry = delta + gamma * lam * (boundary ? 0.0 : carry);
    out_advantages[i] = carry;
    out_returns[i] = carry + values[i];
  }
}

}  // namespace gwrl::rl
