#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "gwrl/data/dataset.hpp"
#include "gwrl/data/regime.hpp"
#include "gwrl/env/factory.hpp"

using namespace gwrl;
using namespace gwrl::data;

namespace {
std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("generate_dataset: shapes, determinism, manifest bookkeeping") {
  const auto d = generate_dataset(EnvId::simple_shapes, 4, 0);
  CHECK(d.manifest.n == 4);
  CHECK(d.manifest.height == 32);
  CHECK(d.manifest.width == 32);
  CHECK(d.manifest.attr_dim == 11);
  CHECK(d.images.size() == 4u * 32 * 32 * 3);
  CHECK(d.attrs.size() == 4u * 11);

  const auto again = generate_dataset(EnvId::simple_shapes, 4, 0);
  CHECK(d == again);  // byte-for-byte

  const auto other_seed = generate_dataset(EnvId::simple_shapes, 4, 1);
  CHECK(d.images != other_seed.images);
}

TEST_CASE("generation is per-sample substreamed (shard equivalence)") {
  const auto big = generate_dataset(EnvId::simple_shapes, 20, 7);
  const auto prefix = generate_dataset(EnvId::simple_shapes, 10, 7);
  CHECK(std::equal(prefix.images.begin(), prefix.images.end(), big.images.begin()));
  CHECK(std::equal(prefix.attrs.begin(), prefix.attrs.end(), big.attrs.begin()));
}

TEST_CASE("factory dataset attributes span their domains") {
  const auto d = generate_dataset(EnvId::factory, 100, 1);
  for (std::int64_t i = 0; i < d.manifest.n; ++i) {
    const auto view = d.attr(i);
    const auto s = env::fac::from_attributes(env::AttrVec(view.begin(), view.end()));
    CHECK(s.table_hue >= 0.0);
    CHECK(s.table_hue < 1.0);
    CHECK(s.robot_theta >= 0.0);
    CHECK(s.robot_theta < 2.0 * 3.14159265358979323846);
    for (const float c : view) {
      CHECK(c >= -1.0f);
      CHECK(c <= 1.0f);
    }
  }
}

TEST_CASE("generate rejects bad arguments") {
  CHECK_THROWS_AS(generate_dataset(EnvId::simple_shapes, 0, 0), ConfigError);
  CHECK_THROWS_AS(env_from_string("webots"), ConfigError);
}

TEST_CASE("save/load round-trips exactly") {
  const auto d = generate_dataset(EnvId::simple_shapes, 10, 42);
  const auto path = temp_path("gwrl_roundtrip.gwd");
  save_dataset(d, path);
  const auto loaded = load_dataset(path);
  CHECK(loaded == d);
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects corruption and version mismatches") {
  const auto d = generate_dataset(EnvId::simple_shapes, 3, 2);
  const auto path = temp_path("gwrl_corrupt.gwd");
  save_dataset(d, path);

  SUBCASE("corrupted magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS(load_dataset(path), CorruptDatasetError);
  }
  SUBCASE("corrupted manifest") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(16);  // inside the manifest JSON
    f.write("\x01\x02\x03\x04", 4);
    f.close();
    CHECK_THROWS_AS(load_dataset(path), CorruptDatasetError);
  }
  SUBCASE("truncated payload") {
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 64);
    CHECK_THROWS_AS(load_dataset(path), CorruptDatasetError);
  }
  SUBCASE("format version from the future") {
    // Rewrite with a bumped format_version; loader must refuse explicitly.
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto pos = bytes.find("\"format_version\":1");
    REQUIRE(pos != std::string::npos);
    bytes.replace(pos, 18, "\"format_version\":9");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    CHECK_THROWS_AS(load_dataset(path), IncompatibleDatasetError);
  }
  std::filesystem::remove(path);
}

TEST_CASE("split_regime sizes |M| by rounding the fraction") {
  const auto full = split_regime_indices(400, 1.0, 0);
  CHECK(full.paired.size() == 400);

  const auto quarter = split_regime_indices(400, 0.25, 0);
  CHECK(quarter.paired.size() == 100);

  const auto low = split_regime_indices(500000, 0.01, 0);
  CHECK(low.paired.size() == 5000);

  CHECK_THROWS_AS(split_regime_indices(100, 0.0, 0), ConfigError);
  CHECK_THROWS_AS(split_regime_indices(100, 1.5, 0), ConfigError);
}

TEST_CASE("split is a partition: every half appears exactly once per stream") {
  const auto d = generate_dataset(EnvId::simple_shapes, 64, 5);
  const auto s = split_regime(d, 0.25, 9);
  CHECK(s.paired.size() == 16);
  CHECK(s.attr_order.size() == 64);
  CHECK(s.vision_order.size() == 64);
  std::set<std::uint32_t> attr_set(s.attr_order.begin(), s.attr_order.end());
  std::set<std::uint32_t> vis_set(s.vision_order.begin(), s.vision_order.end());
  CHECK(attr_set.size() == 64);
  CHECK(vis_set.size() == 64);
  for (const auto ix : s.paired) {
    CHECK(attr_set.count(ix) == 1);
    CHECK(vis_set.count(ix) == 1);
  }
  // Independent shuffles: the two streams do not share an order.
  CHECK(s.attr_order != s.vision_order);
  CHECK(s.dataset_hash == dataset_hash(d));

  const auto path = temp_path("gwrl_split.json");
  save_split(s, path);
  CHECK(load_split(path) == s);
  std::filesystem::remove(path);
}
