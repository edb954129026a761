#include "gwrl/models/mlp.hpp"

namespace gwrl::models {

MlpImpl::MlpImpl(int in_dim, std::vector<int> hidden, int out_dim, Act act)
    : act_(act), in_dim_(in_dim), out_dim_(out_dim) {
  int prev = in_dim;
  int idx = 0;
  for (const int h : hidden) {
    layers.push_back(register_module("fc" + std::to_string(idx++), torch::nn::Linear(prev, h)));
    prev = h;
  }
  layers.push_back(register_module("fc" + std::to_string(idx), torch::nn::Linear(prev, out_dim)));
}

torch::Tensor MlpImpl::forward(torch::Tensor x) {
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    x = layers[i]->forward(x);
    x = act_ == Act::relu ? torch::relu(x) : torch::tanh(x);
  }
  return layers.back()->forward(x);
}

}  // namespace gwrl::models
