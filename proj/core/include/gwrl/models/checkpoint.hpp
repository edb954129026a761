#pragma once

#include <cstdint>
#include <string>

#include <torch/torch.h>

namespace gwrl::models {

// Weights archive at `path` plus a human-readable `<path>.json` sidecar
// (arch name, dims, upstream hashes). Loading requires the module to be
// constructed with the same architecture first.
void save_module(const torch::nn::Module& module, const std::string& path);
void load_module(torch::nn::Module& module, const std::string& path);

void write_sidecar(const std::string& ckpt_path, const std::string& json_text);
std::string read_sidecar(const std::string& ckpt_path);

// Order-stable fingerprint of all parameters and buffers. Two modules with
// identical weights hash identically; any drift (e.g. an optimizer touching a
// frozen net) changes it.
std::string module_param_hash(const torch::nn::Module& module);

std::int64_t parameter_count(const torch::nn::Module& module);

}  // namespace gwrl::models
