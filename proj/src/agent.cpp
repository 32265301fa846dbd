#include "cfrlab/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace cfrlab::agent {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
    return;
  }
  storage_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::oldest(size_t i) const {
  if (i >= storage_.size()) throw ContractViolation("ReplayBuffer::oldest out of range");
  return storage_[(head_ + i) % storage_.size()];
}

std::vector<const Transition*> ReplayBuffer::sample(size_t batch, Rng& rng) const {
  if (batch > storage_.size())
    throw ContractViolation("ReplayBuffer::sample on an underfilled buffer");
  std::vector<size_t> idx(storage_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<const Transition*> out;
  out.reserve(batch);
  for (size_t i = 0; i < batch; ++i) {
    const size_t j = i + rng.uniform_int(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(&storage_[idx[i]]);
  }
  return out;
}

void DqnConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (discount <= 0 || discount > 1) throw ConfigError("discount must be in (0, 1]");
  if (epsilon < 0 || epsilon > 1) throw ConfigError("epsilon must be in [0, 1]");
  if (target_sync_every < 1) throw ConfigError("target_sync_every must be >= 1");
  if (learning_rate <= 0) throw ConfigError("learning_rate must be positive");
  if (replay_capacity < static_cast<size_t>(batch_size))
    throw ConfigError("replay capacity below batch size");
}

double DqnConfig::epsilon_at(int64_t step) const {
  if (epsilon_decay_steps <= 0) return epsilon;
  const double frac = std::min(1.0, static_cast<double>(step) / epsilon_decay_steps);
  return epsilon + frac * (epsilon_final - epsilon);
}

int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

double td_target(double reward, bool done, std::span<const double> next_q, double discount) {
  if (discount <= 0 || discount > 1) throw ContractViolation("discount must be in (0, 1]");
  if (done) return reward;
  return reward + discount * *std::max_element(next_q.begin(), next_q.end());
}

DqnAgent::DqnAgent(nn::NetworkSpec net_spec, DqnConfig config)
    : net_spec_(std::move(net_spec)),
      config_(config),
      online_(nn::init(net_spec_)),
      target_(online_),
      grad_(nn::zeros_like(net_spec_)),
      buffer_(config.replay_capacity),
      rng_(config.seed ^ 0x9e3779b97f4a7c15ull) {
  config_.validate();
}

int DqnAgent::select_action(std::span<const double> obs, double epsilon) {
  if (epsilon < 0 || epsilon > 1) throw ContractViolation("epsilon must be in [0, 1]");
  const auto q = nn::forward(online_, obs);
  if (epsilon > 0 && rng_.uniform01() < epsilon)
    return static_cast<int>(rng_.uniform_int(q.size()));
  return argmax_lowest(q);
}

int DqnAgent::select_action(std::span<const double> obs) {
  return select_action(obs, config_.epsilon_at(step_));
}

int DqnAgent::greedy_action(std::span<const double> obs) const {
  return argmax_lowest(nn::forward(online_, obs));
}

std::vector<double> DqnAgent::qvalues(std::span<const double> obs) const {
  return nn::forward(online_, obs);
}

void DqnAgent::add_transition(Transition t) {
  const int n_actions = net_spec_.layer_dims.back();
  if (t.action < 0 || t.action >= n_actions)
    throw ContractViolation("transition action index out of range");
  buffer_.push(std::move(t));
}

std::optional<double> DqnAgent::train_step() {
  if (buffer_.size() < static_cast<size_t>(config_.batch_size)) return std::nullopt;
  const auto batch = buffer_.sample(config_.batch_size, rng_);
  grad_.set_zero();
  double loss = 0;
  const double scale = 1.0 / config_.batch_size;
  for (const Transition* t : batch) {
    const auto next_q = nn::forward(target_, t->next_state);
    const double y = td_target(t->reward, t->done, next_q, config_.discount);
    loss += scale * nn::backward(online_, t->state, t->action, y, grad_, scale);
  }
  if (!std::isfinite(loss)) throw TrainingError("non-finite training loss");
  nn::sgd_step(online_, grad_, config_.learning_rate);
  ++step_;
  if (step_ % config_.target_sync_every == 0) target_ = online_;
  return loss;
}

namespace {
constexpr char kMagic[] = "cfrlab-dqn";
constexpr int kVersion = 1;
}  // namespace

void DqnAgent::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << kMagic << ' ' << kVersion << '\n';
  os << "step " << step_ << '\n';
  nn::save_network(os, net_spec_, online_);
  nn::save_network(os, net_spec_, target_);
  if (!os) throw IoError("write failure on '" + path + "'");
}

DqnAgent DqnAgent::load(const std::string& path) { return load(path, DqnConfig{}); }

DqnAgent DqnAgent::load(const std::string& path, DqnConfig config) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open checkpoint '" + path + "'");
  std::string tok;
  int version = 0;
  if (!(is >> tok >> version) || tok != kMagic) throw IoError("not an agent checkpoint");
  if (version != kVersion) throw IoError("unsupported agent checkpoint version");
  int64_t step = 0;
  if (!(is >> tok >> step) || tok != "step") throw IoError("malformed agent checkpoint");
  auto [spec, online] = nn::load_network(is);
  auto [spec2, target] = nn::load_network(is);
  if (spec.layer_dims != spec2.layer_dims)
    throw IoError("agent checkpoint networks disagree on shape");
  config.seed = config.seed ? config.seed : spec.seed;
  DqnAgent agent(spec, config);
  agent.online_ = std::move(online);
  agent.target_ = std::move(target);
  agent.step_ = step;
  return agent;
}

}  // namespace cfrlab::agent
