#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfrlab/errors.hpp"

namespace cfrlab::nn {

// Neuron counts per layer boundary; layer_dims.size() - 1 weight layers.
// Hidden layers are rectified, the output layer is linear.
struct NetworkSpec {
  std::vector<int> layer_dims;
  uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

// The Q-network: four fully connected layers, 18-dim observation in, one
// value per update rule out.
NetworkSpec qnetwork_spec(uint64_t seed);

struct NetworkParams {
  struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> w;  // row-major, out x in
    std::vector<double> b;
  };
  std::vector<Layer> layers;

  void set_zero();
  bool same_shape(const NetworkParams& other) const;
};

// Weights uniform in [-s, s] with s = sqrt(2 / fan_in); biases zero.
// Deterministic given the spec's seed.
NetworkParams init(const NetworkSpec& spec);
NetworkParams zeros_like(const NetworkSpec& spec);

std::vector<double> forward(const NetworkParams& params, std::span<const double> input);

// (target - pred[action])^2; gradient flows only through the chosen action.
double mse_loss(std::span<const double> pred, int action, double target);

// Accumulates scale * d(loss)/d(param) into grad (which must match shapes);
// returns the sample loss.
double backward(const NetworkParams& params, std::span<const double> input, int action,
                double target, NetworkParams& grad, double scale = 1.0);

// params -= lr * grad. Throws TrainingError on non-finite gradients.
void sgd_step(NetworkParams& params, const NetworkParams& grad, double learning_rate);

void save_network(std::ostream& os, const NetworkSpec& spec, const NetworkParams& params);
std::pair<NetworkSpec, NetworkParams> load_network(std::istream& is);  // throws IoError

}  // namespace cfrlab::nn
