#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfrlab/nn.hpp"
#include "cfrlab/rng.hpp"

namespace cfrlab::agent {

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0;
  std::vector<double> next_state;
  bool done = false;
};

// Fixed-capacity FIFO: insertion beyond capacity evicts the oldest element.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity = 2000);

  void push(Transition t);
  size_t size() const { return storage_.size(); }
  size_t capacity() const { return capacity_; }
  const Transition& oldest(size_t i) const;  // i-th oldest, i < size()
  // Uniform without replacement within one batch; deterministic under a
  // fixed rng. Requires size() >= batch.
  std::vector<const Transition*> sample(size_t batch, Rng& rng) const;

 private:
  size_t capacity_;
  size_t head_ = 0;  // index of the oldest element once full
  std::vector<Transition> storage_;
};

struct DqnConfig {
  int batch_size = 32;
  double discount = 0.99;
  double epsilon = 0.1;
  int target_sync_every = 200;
  double learning_rate = 1e-3;
  int train_steps = 20000;
  uint64_t seed = 0;
  size_t replay_capacity = 2000;
  // Optional linear epsilon decay to `epsilon_final` over `epsilon_decay_steps`;
  // off by default (constant epsilon).
  double epsilon_final = 0.1;
  int epsilon_decay_steps = 0;

  void validate() const;  // throws ConfigError
  double epsilon_at(int64_t step) const;
};

// Lowest index wins exact ties.
int argmax_lowest(std::span<const double> values);

// reward if done, else reward + discount * max(next_q).
double td_target(double reward, bool done, std::span<const double> next_q, double discount);

// Epsilon-greedy controller over the update-rule actions, with FIFO replay
// and a periodically synchronized target network. One instance per training
// loop.
class DqnAgent {
 public:
  DqnAgent(nn::NetworkSpec net_spec, DqnConfig config);

  // epsilon = 0 consumes no randomness, so greedy evaluation is a pure
  // function of the observation.
  int select_action(std::span<const double> obs, double epsilon);
  int select_action(std::span<const double> obs);  // config epsilon w/ decay
  int greedy_action(std::span<const double> obs) const;
  std::vector<double> qvalues(std::span<const double> obs) const;

  void add_transition(Transition t);
  // One gradient step on a sampled batch: targets from the target network,
  // gradients through the online network. Returns the batch loss, or nullopt
  // while the buffer holds fewer than batch_size transitions.
  std::optional<double> train_step();

  int64_t steps() const { return step_; }
  const DqnConfig& config() const { return config_; }
  const nn::NetworkSpec& net_spec() const { return net_spec_; }
  const nn::NetworkParams& online() const { return online_; }
  const nn::NetworkParams& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }

  void save(const std::string& path) const;
  static DqnAgent load(const std::string& path);
  static DqnAgent load(const std::string& path, DqnConfig config);

 private:
  nn::NetworkSpec net_spec_;
  DqnConfig config_;
  nn::NetworkParams online_;
  nn::NetworkParams target_;
  nn::NetworkParams grad_;
  ReplayBuffer buffer_;
  Rng rng_;
  int64_t step_ = 0;
};

}  // namespace cfrlab::agent
