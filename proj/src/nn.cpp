#include "cfrlab/nn.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

#include "cfrlab/rng.hpp"

namespace cfrlab::nn {

namespace {
constexpr char kMagic[] = "cfrlab-net";
constexpr int kVersion = 1;
}  // namespace

void NetworkSpec::validate() const {
  if (layer_dims.size() < 2) throw ConfigError("network needs at least one weight layer");
  for (int d : layer_dims)
    if (d < 1) throw ConfigError("network layer dims must be positive");
}

NetworkSpec qnetwork_spec(uint64_t seed) { return NetworkSpec{{18, 64, 64, 64, 7}, seed}; }

void NetworkParams::set_zero() {
  for (auto& l : layers) {
    std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
}

bool NetworkParams::same_shape(const NetworkParams& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (size_t i = 0; i < layers.size(); ++i)
    if (layers[i].in != other.layers[i].in || layers[i].out != other.layers[i].out)
      return false;
  return true;
}

NetworkParams zeros_like(const NetworkSpec& spec) {
  spec.validate();
  NetworkParams p;
  for (size_t l = 0; l + 1 < spec.layer_dims.size(); ++l) {
    NetworkParams::Layer layer;
    layer.in = spec.layer_dims[l];
    layer.out = spec.layer_dims[l + 1];
    layer.w.assign(static_cast<size_t>(layer.in) * layer.out, 0.0);
    layer.b.assign(layer.out, 0.0);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

NetworkParams init(const NetworkSpec& spec) {
  NetworkParams p = zeros_like(spec);
  Rng rng(spec.seed);
  for (auto& l : p.layers) {
    const double s = std::sqrt(2.0 / l.in);
    for (auto& w : l.w) w = rng.uniform(-s, s);
  }
  return p;
}

std::vector<double> forward(const NetworkParams& params, std::span<const double> input) {
  if (params.layers.empty() || static_cast<int>(input.size()) != params.layers.front().in)
    throw ContractViolation("forward: input dimension mismatch");
  std::vector<double> h(input.begin(), input.end());
  std::vector<double> z;
  for (size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    z.assign(layer.out, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      double acc = layer.b[o];
      const double* row = layer.w.data() + static_cast<size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) acc += row[i] * h[i];
      z[o] = acc;
    }
    const bool hidden = l + 1 < params.layers.size();
    if (hidden)
      for (auto& v : z) v = std::max(v, 0.0);
    h.swap(z);
  }
  return h;
}

double mse_loss(std::span<const double> pred, int action, double target) {
  if (action < 0 || action >= static_cast<int>(pred.size()))
    throw ContractViolation("mse_loss: action index out of range");
  const double d = target - pred[action];
  return d * d;
}

double backward(const NetworkParams& params, std::span<const double> input, int action,
                double target, NetworkParams& grad, double scale) {
  if (!params.same_shape(grad)) throw ContractViolation("backward: gradient shape mismatch");
  const size_t nl = params.layers.size();
  // Forward pass keeping post-activation values per layer.
  std::vector<std::vector<double>> acts(nl + 1);
  acts[0].assign(input.begin(), input.end());
  if (static_cast<int>(input.size()) != params.layers.front().in)
    throw ContractViolation("backward: input dimension mismatch");
  for (size_t l = 0; l < nl; ++l) {
    const auto& layer = params.layers[l];
    acts[l + 1].assign(layer.out, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      double acc = layer.b[o];
      const double* row = layer.w.data() + static_cast<size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) acc += row[i] * acts[l][i];
      acts[l + 1][o] = (l + 1 < nl) ? std::max(acc, 0.0) : acc;
    }
  }
  const double loss = mse_loss(acts[nl], action, target);
  // Backward pass. Only the chosen output unit carries gradient.
  std::vector<double> delta(params.layers.back().out, 0.0);
  delta[action] = 2.0 * (acts[nl][action] - target);
  for (size_t l = nl; l-- > 0;) {
    const auto& layer = params.layers[l];
    auto& g = grad.layers[l];
    std::vector<double> prev(layer.in, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      g.b[o] += scale * d;
      double* grow = g.w.data() + static_cast<size_t>(o) * layer.in;
      const double* wrow = layer.w.data() + static_cast<size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) {
        grow[i] += scale * d * acts[l][i];
        prev[i] += d * wrow[i];
      }
    }
    if (l > 0) {
      // Rectifier gate: zero activation means zero gradient.
      for (int i = 0; i < layer.in; ++i)
        if (acts[l][i] <= 0.0) prev[i] = 0.0;
      delta.swap(prev);
    }
  }
  return loss;
}

void sgd_step(NetworkParams& params, const NetworkParams& grad, double learning_rate) {
  if (learning_rate < 0) throw ContractViolation("sgd_step: negative learning rate");
  if (!params.same_shape(grad)) throw ContractViolation("sgd_step: gradient shape mismatch");
  for (size_t l = 0; l < params.layers.size(); ++l) {
    for (double g : grad.layers[l].w)
      if (!std::isfinite(g)) throw TrainingError("non-finite weight gradient");
    for (double g : grad.layers[l].b)
      if (!std::isfinite(g)) throw TrainingError("non-finite bias gradient");
    auto& p = params.layers[l];
    const auto& g = grad.layers[l];
    for (size_t i = 0; i < p.w.size(); ++i) p.w[i] -= learning_rate * g.w[i];
    for (size_t i = 0; i < p.b.size(); ++i) p.b[i] -= learning_rate * g.b[i];
  }
}

void save_network(std::ostream& os, const NetworkSpec& spec, const NetworkParams& params) {
  os << kMagic << ' ' << kVersion << '\n';
  os << "dims " << spec.layer_dims.size();
  for (int d : spec.layer_dims) os << ' ' << d;
  os << '\n';
  os << "seed " << spec.seed << '\n';
  os << std::setprecision(17);
  for (size_t l = 0; l < params.layers.size(); ++l) {
    os << "layer " << l << '\n';
    os << "w";
    for (double v : params.layers[l].w) os << ' ' << v;
    os << "\nb";
    for (double v : params.layers[l].b) os << ' ' << v;
    os << '\n';
  }
}

std::pair<NetworkSpec, NetworkParams> load_network(std::istream& is) {
  std::string tok;
  int version = 0;
  if (!(is >> tok >> version) || tok != kMagic) throw IoError("not a network checkpoint");
  if (version != kVersion) throw IoError("unsupported network checkpoint version");
  NetworkSpec spec;
  size_t ndims = 0;
  if (!(is >> tok >> ndims) || tok != "dims") throw IoError("malformed network checkpoint");
  spec.layer_dims.resize(ndims);
  for (auto& d : spec.layer_dims)
    if (!(is >> d)) throw IoError("truncated network checkpoint");
  if (!(is >> tok >> spec.seed) || tok != "seed") throw IoError("malformed network checkpoint");
  spec.validate();
  NetworkParams params = zeros_like(spec);
  for (size_t l = 0; l < params.layers.size(); ++l) {
    size_t idx = 0;
    if (!(is >> tok >> idx) || tok != "layer" || idx != l)
      throw IoError("malformed network checkpoint");
    if (!(is >> tok) || tok != "w") throw IoError("malformed network checkpoint");
    for (auto& v : params.layers[l].w)
      if (!(is >> v)) throw IoError("truncated network checkpoint");
    if (!(is >> tok) || tok != "b") throw IoError("malformed network checkpoint");
    for (auto& v : params.layers[l].b)
      if (!(is >> v)) throw IoError("truncated network checkpoint");
  }
  return {std::move(spec), std::move(params)};
}

}  // namespace cfrlab::nn
