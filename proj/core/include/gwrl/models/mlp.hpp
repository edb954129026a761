#pragma once

#include <vector>

#include <torch/torch.h>

namespace gwrl::models {

enum class Act { relu, tanh };

// Plain fully-connected stack: hidden layers with the chosen activation,
// linear output. No hidden layers degenerates to a single Linear.
struct MlpImpl : torch::nn::Module {
  MlpImpl(int in_dim, std::vector<int> hidden, int out_dim, Act act = Act::relu);

  torch::Tensor forward(torch::Tensor x);

  std::vector<torch::nn::Linear> layers;
  Act act_;
  int in_dim_ = 0;
  int out_dim_ = 0;
};
TORCH_MODULE(Mlp);

}  // namespace gwrl::models
