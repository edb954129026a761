#include "gwrl/data/regime.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "gwrl/util/rng.hpp"

namespace gwrl::data {

RegimeSplit split_regime(const Dataset& d, double paired_fraction, std::uint64_t seed) {
  RegimeSplit s = split_regime_indices(d.manifest.n, paired_fraction, seed);
  s.dataset_hash = dataset_hash(d);
  return s;
}

RegimeSplit split_regime_indices(std::int64_t n_samples, double paired_fraction,
                                 std::uint64_t seed) {
  if (!(paired_fraction > 0.0) || paired_fraction > 1.0) {
    throw ConfigError("split_regime: paired_fraction must be in (0, 1]");
  }
  const auto n = static_cast<std::uint32_t>(n_samples);
  const auto m = static_cast<std::uint32_t>(std::llround(paired_fraction * static_cast<double>(n)));

  RegimeSplit s;
  s.paired_fraction = paired_fraction;
  s.seed = seed;

  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);

  util::Rng pick(util::mix64(seed ^ 0x70617274ULL));
  pick.shuffle(all);
  s.paired.assign(all.begin(), all.begin() + m);
  std::sort(s.paired.begin(), s.paired.end());

  s.attr_order.resize(n);
  std::iota(s.attr_order.begin(), s.attr_order.end(), 0u);
  util::Rng attr_rng(util::mix64(seed ^ 0x61747472ULL));
  attr_rng.shuffle(s.attr_order);

  s.vision_order.resize(n);
  std::iota(s.vision_order.begin(), s.vision_order.end(), 0u);
  util::Rng vis_rng(util::mix64(seed ^ 0x76697331ULL));
  vis_rng.shuffle(s.vision_order);
  return s;
}

void save_split(const RegimeSplit& s, const std::string& path) {
  nlohmann::json j{{"paired_fraction", s.paired_fraction},
                   {"seed", s.seed},
                   {"dataset_hash", s.dataset_hash},
                   {"paired", s.paired},
                   {"attr_order", s.attr_order},
                   {"vision_order", s.vision_order}};
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) {
      throw std::runtime_error("save_split: cannot open " + tmp);
    }
    out << j.dump();
  }
  std::filesystem::rename(tmp, path);
}

RegimeSplit load_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_split: cannot open " + path);
  }
  nlohmann::json j = nlohmann::json::parse(in);
  RegimeSplit s;
  s.paired_fraction = j.at("paired_fraction").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.dataset_hash = j.at("dataset_hash").get<std::string>();
  s.paired = j.at("paired").get<std::vector<std::uint32_t>>();
  s.attr_order = j.at("attr_order").get<std::vector<std::uint32_t>>();
  s.vision_order = j.at("vision_order").get<std::vector<std::uint32_t>>();
  return s;
}

}  // namespace gwrl::data
