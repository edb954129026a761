#include "gwrl/models/checkpoint.hpp"

#include <filesystem>
#include <fstream>

#include "gwrl/util/hash.hpp"

namespace gwrl::models {

void save_module(const torch::nn::Module& module, const std::string& path) {
  torch::serialize::OutputArchive archive;
  const_cast<torch::nn::Module&>(module).save(archive);
  const std::string tmp = path + ".tmp";
  archive.save_to(tmp);
  std::filesystem::rename(tmp, path);
}

void load_module(torch::nn::Module& module, const std::string& path) {
  torch::serialize::InputArchive archive;
  archive.load_from(path);
  module.load(archive);
}

void write_sidecar(const std::string& ckpt_path, const std::string& json_text) {
  std::ofstream out(ckpt_path + ".json", std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_sidecar: cannot open " + ckpt_path + ".json");
  }
  out << json_text;
}

std::string read_sidecar(const std::string& ckpt_path) {
  std::ifstream in(ckpt_path + ".json");
  if (!in) {
    throw std::runtime_error("read_sidecar: cannot open " + ckpt_path + ".json");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string module_param_hash(const torch::nn::Module& module) {
  util::Fnv1a h;
  auto feed = [&h](const std::string& name, const torch::Tensor& t) {
    h.update(name);
    auto flat = t.detach().to(torch::kCPU).contiguous().to(torch::kFloat64);
    h.update(flat.data_ptr<double>(), static_cast<std::size_t>(flat.numel()) * sizeof(double));
  };
  for (const auto& p : module.named_parameters(/*recurse=*/true)) {
    feed(p.key(), p.value());
  }
  for (const auto& b : module.named_buffers(/*recurse=*/true)) {
    feed(b.key(), b.value());
  }
  return h.hex();
}

std::int64_t parameter_count(const torch::nn::Module& module) {
  std::int64_t total = 0;
  for (const auto& p : module.parameters(/*recurse=*/true)) {
    total += p.numel();
  }
  return total;
}

}  // namespace gwrl::models
