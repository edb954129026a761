#include "gwrl/data/dataset.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gwrl/env/factory.hpp"
#include "gwrl/env/simple_shapes.hpp"
#include "gwrl/util/hash.hpp"
#include "gwrl/util/rng.hpp"

namespace gwrl::data {

namespace {

constexpr char kMagic[8] = {'G', 'W', 'D', 'S', 'E', 'T', '0', '1'};
constexpr int kFormatVersion = 1;

using nlohmann::json;

json manifest_to_json(const DatasetManifest& m) {
  return json{{"format_version", kFormatVersion},
              {"env", to_string(m.env)},
              {"renderer_version", m.renderer_version},
              {"seed", m.seed},
              {"n", m.n},
              {"height", m.height},
              {"width", m.width},
              {"attr_dim", m.attr_dim}};
}

DatasetManifest manifest_from_json(const json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw IncompatibleDatasetError("dataset format_version " + std::to_string(version) +
                                   " not supported by this loader (expects " +
                                   std::to_string(kFormatVersion) + ")");
  }
  DatasetManifest m;
  m.env = env_from_string(j.at("env").get<std::string>());
  m.renderer_version = j.at("renderer_version").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.n = j.at("n").get<std::int64_t>();
  m.height = j.at("height").get<int>();
  m.width = j.at("width").get<int>();
  m.attr_dim = j.at("attr_dim").get<int>();
  return m;
}

}  // namespace

const char* to_string(EnvId id) {
  return id == EnvId::simple_shapes ? "simple_shapes" : "factory";
}

EnvId env_from_string(const std::string& name) {
  if (name == "simple_shapes") return EnvId::simple_shapes;
  if (name == "factory") return EnvId::factory;
  throw ConfigError("unknown env id: '" + name + "' (expected simple_shapes or factory)");
}

env::Image Dataset::image_copy(std::int64_t i) const {
  env::Image img;
  img.height = manifest.height;
  img.width = manifest.width;
  const auto view = image(i);
  img.rgb.assign(view.begin(), view.end());
  return img;
}

Dataset generate_dataset(EnvId env_id, std::int64_t n, std::uint64_t seed) {
  if (n < 1) {
    throw ConfigError("generate_dataset: n must be >= 1");
  }
  Dataset d;
  d.manifest.env = env_id;
  d.manifest.seed = seed;
  d.manifest.n = n;
  if (env_id == EnvId::simple_shapes) {
    d.manifest.renderer_version = env::ss::kRendererVersion;
    d.manifest.height = env::ss::kImageSize;
    d.manifest.width = env::ss::kImageSize;
    d.manifest.attr_dim = env::ss::kAttrDim;
  } else {
    d.manifest.renderer_version = env::fac::kRendererVersion;
    d.manifest.height = env::fac::kImageSize;
    d.manifest.width = env::fac::kImageSize;
    d.manifest.attr_dim = env::fac::kAttrDim;
  }
  d.images.resize(static_cast<std::size_t>(n) * d.image_stride());
  d.attrs.resize(static_cast<std::size_t>(n) * d.manifest.attr_dim);

  for (std::int64_t i = 0; i < n; ++i) {
    util::Rng rng(util::substream(seed, static_cast<std::uint64_t>(i)));
    env::Image img;
    env::AttrVec attr;
    if (env_id == EnvId::simple_shapes) {
      const auto s = env::ss::sample_state(rng);
      img = env::ss::render(s);
      attr = env::ss::to_attributes(s);
    } else {
      const auto s = env::fac::sample_state(rng);
      img = env::fac::render(s);
      attr = env::fac::to_attributes(s);
    }
    std::memcpy(d.images.data() + static_cast<std::size_t>(i) * d.image_stride(), img.rgb.data(),
                d.image_stride());
    std::memcpy(d.attrs.data() + static_cast<std::size_t>(i) * d.manifest.attr_dim, attr.data(),
                attr.size() * sizeof(float));
  }
  return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
  const std::string manifest = manifest_to_json(d.manifest).dump();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("save_dataset: cannot open " + tmp);
    }
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t len = manifest.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(manifest.data(), static_cast<std::streamsize>(manifest.size()));
    out.write(reinterpret_cast<const char*>(d.images.data()),
              static_cast<std::streamsize>(d.images.size()));
    out.write(reinterpret_cast<const char*>(d.attrs.data()),
              static_cast<std::streamsize>(d.attrs.size() * sizeof(float)));
    if (!out) {
      throw std::runtime_error("save_dataset: short write to " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_dataset: cannot open " + path);
  }
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CorruptDatasetError("load_dataset: bad magic in " + path);
  }
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len == 0 || len > (1u << 20)) {
    throw CorruptDatasetError("load_dataset: implausible manifest length in " + path);
  }
  std::string manifest_text(len, '\0');
  in.read(manifest_text.data(), static_cast<std::streamsize>(len));
  if (!in) {
    throw CorruptDatasetError("load_dataset: truncated manifest in " + path);
  }
  nlohmann::json j = nlohmann::json::parse(manifest_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw CorruptDatasetError("load_dataset: manifest is not valid JSON in " + path);
  }
  Dataset d;
  try {
    d.manifest = manifest_from_json(j);
  } catch (const IncompatibleDatasetError&) {
    throw;
  } catch (const std::exception& e) {
    throw CorruptDatasetError(std::string("load_dataset: bad manifest: ") + e.what());
  }
  const std::size_t image_bytes = static_cast<std::size_t>(d.manifest.n) * d.image_stride();
  const std::size_t attr_count = static_cast<std::size_t>(d.manifest.n) * d.manifest.attr_dim;
  d.images.resize(image_bytes);
  d.attrs.resize(attr_count);
  in.read(reinterpret_cast<char*>(d.images.data()), static_cast<std::streamsize>(image_bytes));
  in.read(reinterpret_cast<char*>(d.attrs.data()),
          static_cast<std::streamsize>(attr_count * sizeof(float)));
  if (!in) {
    throw CorruptDatasetError("load_dataset: truncated payload in " + path);
  }
  in.peek();
  if (!in.eof()) {
    throw CorruptDatasetError("load_dataset: trailing bytes in " + path);
  }
  return d;
}

std::string dataset_hash(const Dataset& d) {
  util::Fnv1a h;
  const std::string manifest = manifest_to_json(d.manifest).dump();
  h.update(manifest);
  h.update(d.images.data(), d.images.size());
  h.update(d.attrs.data(), d.attrs.size() * sizeof(float));
  return h.hex();
}

}  // namespace gwrl::data
