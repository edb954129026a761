#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwrl/data/dataset.hpp"

namespace gwrl::data {

// A data regime over one dataset: the paired subset M plus the two unimodal
// streams U_attr and U_v. The streams are independently shuffled index
// permutations, so nothing about row order links an unpaired attribute
// vector to its image half.
struct RegimeSplit {
  double paired_fraction = 1.0;
  std::uint64_t seed = 0;
  std::string dataset_hash;
  std::vector<std::uint32_t> paired;        // M, sorted indices
  std::vector<std::uint32_t> attr_order;    // permutation of [0, n)
  std::vector<std::uint32_t> vision_order;  // permutation of [0, n)

  bool operator==(const RegimeSplit&) const = default;

  std::size_t n() const { return attr_order.size(); }
};

// |M| = round(fraction * n). Throws ConfigError unless 0 < fraction <= 1.
RegimeSplit split_regime(const Dataset& d, double paired_fraction, std::uint64_t seed);

// Index-only variant (no dataset binding); split_regime delegates here.
RegimeSplit split_regime_indices(std::int64_t n, double paired_fraction, std::uint64_t seed);

void save_split(const RegimeSplit& s, const std::string& path);
RegimeSplit load_split(const std::string& path);

}  // namespace gwrl::data
