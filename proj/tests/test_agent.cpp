#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "cfrlab/agent.hpp"

using namespace cfrlab::agent;
using cfrlab::Rng;

namespace {

Transition make_transition(double tag, int action = 0) {
  Transition t;
  t.state = {tag, 0.0};
  t.action = action;
  t.reward = 0.0;
  t.next_state = {tag, 1.0};
  t.done = true;
  return t;
}

bool params_equal(const cfrlab::nn::NetworkParams& a, const cfrlab::nn::NetworkParams& b) {
  if (!a.same_shape(b)) return false;
  for (size_t l = 0; l < a.layers.size(); ++l) {
    if (a.layers[l].w != b.layers[l].w) return false;
    if (a.layers[l].b != b.layers[l].b) return false;
  }
  return true;
}

DqnConfig small_config(uint64_t seed) {
  DqnConfig c;
  c.batch_size = 8;
  c.replay_capacity = 64;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("config validation and epsilon schedule") {
  DqnConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.batch_size == 32);
  CHECK(c.discount == 0.99);
  CHECK(c.target_sync_every == 200);
  CHECK(c.replay_capacity == 2000);

  DqnConfig bad = c;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), cfrlab::ConfigError);
  bad = c;
  bad.discount = 1.5;
  CHECK_THROWS_AS(bad.validate(), cfrlab::ConfigError);
  bad = c;
  bad.replay_capacity = 8;
  CHECK_THROWS_AS(bad.validate(), cfrlab::ConfigError);

  // Constant by default.
  CHECK(c.epsilon_at(0) == 0.1);
  CHECK(c.epsilon_at(123456) == 0.1);
  // Linear decay when enabled.
  c.epsilon = 1.0;
  c.epsilon_final = 0.1;
  c.epsilon_decay_steps = 100;
  CHECK(c.epsilon_at(0) == doctest::Approx(1.0));
  CHECK(c.epsilon_at(50) == doctest::Approx(0.55));
  CHECK(c.epsilon_at(100) == doctest::Approx(0.1));
  CHECK(c.epsilon_at(100000) == doctest::Approx(0.1));
}

TEST_CASE("argmax breaks ties toward the lowest index") {
  CHECK(argmax_lowest(std::array{1.0, 3.0, 2.0}) == 1);
  CHECK(argmax_lowest(std::array{2.0, 2.0, 2.0}) == 0);
  CHECK(argmax_lowest(std::array{-1.0, -3.0}) == 0);
  CHECK(argmax_lowest(std::array{0.0, 1.0, 1.0}) == 1);
}

TEST_CASE("td target worked examples") {
  const std::array next_q{0.5, 2.0, -1.0};
  CHECK(td_target(1.0, true, next_q, 0.99) == 1.0);
  CHECK(td_target(1.0, false, next_q, 0.99) == doctest::Approx(1.0 + 0.99 * 2.0));
  CHECK(td_target(-0.5, false, next_q, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(td_target(0.0, false, next_q, 0.0), cfrlab::ContractViolation);
}

TEST_CASE("replay buffer evicts oldest-first at capacity") {
  ReplayBuffer buf(5);
  for (int i = 0; i < 7; ++i) buf.push(make_transition(i));
  CHECK(buf.size() == 5);
  CHECK(buf.capacity() == 5);
  for (int i = 0; i < 5; ++i) CHECK(buf.oldest(i).state[0] == doctest::Approx(i + 2));
  CHECK_THROWS_AS(buf.oldest(5), cfrlab::ContractViolation);

  // Exactly at capacity nothing is lost.
  ReplayBuffer exact(3);
  for (int i = 0; i < 3; ++i) exact.push(make_transition(i));
  for (int i = 0; i < 3; ++i) CHECK(exact.oldest(i).state[0] == doctest::Approx(i));
}

TEST_CASE("replay sampling is uniform-without-replacement and deterministic") {
  ReplayBuffer buf(16);
  for (int i = 0; i < 10; ++i) buf.push(make_transition(i));

  Rng rng(5);
  CHECK_THROWS_AS(buf.sample(11, rng), cfrlab::ContractViolation);

  // A full-size sample is a permutation: every element exactly once.
  const auto all = buf.sample(10, rng);
  std::set<const Transition*> seen(all.begin(), all.end());
  CHECK(seen.size() == 10);

  // Partial samples have no duplicates.
  for (int trial = 0; trial < 20; ++trial) {
    const auto batch = buf.sample(4, rng);
    std::set<const Transition*> s(batch.begin(), batch.end());
    CHECK(s.size() == 4);
  }

  // Same rng state, same sample.
  Rng r1(77), r2(77);
  const auto b1 = buf.sample(6, r1);
  const auto b2 = buf.sample(6, r2);
  CHECK(b1 == b2);
}

TEST_CASE("greedy selection consumes no randomness") {
  const auto spec = cfrlab::nn::NetworkSpec{{2, 8, 3}, 42};
  DqnAgent a(spec, small_config(9));
  DqnAgent b(spec, small_config(9));
  const std::array obs{0.3, -0.7};
  for (int i = 0; i < 100; ++i) {
    const int action = a.select_action(obs, 0.0);
    CHECK(action == a.greedy_action(obs));
  }
  // After 100 greedy selections, agent a's rng is still in lockstep with
  // agent b's, so their first exploratory draws coincide.
  for (int i = 0; i < 10; ++i) CHECK(a.select_action(obs, 1.0) == b.select_action(obs, 1.0));
  CHECK_THROWS_AS(a.select_action(obs, 1.5), cfrlab::ContractViolation);
  CHECK_THROWS_AS(a.select_action(obs, -0.1), cfrlab::ContractViolation);
}

TEST_CASE("fully exploratory selection is near-uniform over actions") {
  const auto spec = cfrlab::nn::NetworkSpec{{2, 8, 7}, 1};
  DqnAgent agent(spec, small_config(2));
  const std::array obs{0.0, 1.0};
  std::array<int, 7> counts{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[agent.select_action(obs, 1.0)];
  for (int a = 0; a < 7; ++a) CHECK(std::abs(counts[a] - n / 7) < 500);
}

TEST_CASE("transitions with out-of-range actions are rejected") {
  DqnAgent agent(cfrlab::nn::NetworkSpec{{2, 4, 3}, 0}, small_config(0));
  CHECK_THROWS_AS(agent.add_transition(make_transition(0, 3)), cfrlab::ContractViolation);
  CHECK_THROWS_AS(agent.add_transition(make_transition(0, -1)), cfrlab::ContractViolation);
  CHECK_NOTHROW(agent.add_transition(make_transition(0, 2)));
}

TEST_CASE("training waits for a full batch, then steps and syncs the target") {
  auto config = small_config(3);
  config.target_sync_every = 3;
  DqnAgent agent(cfrlab::nn::NetworkSpec{{2, 8, 2}, 7}, config);
  CHECK(params_equal(agent.online(), agent.target()));  // synced at start

  for (int i = 0; i < config.batch_size - 1; ++i) {
    agent.add_transition(make_transition(i, i % 2));
    CHECK_FALSE(agent.train_step().has_value());
  }
  CHECK(agent.steps() == 0);
  agent.add_transition(make_transition(99, 0));

  REQUIRE(agent.train_step().has_value());  // step 1: online moved, target fixed
  CHECK(agent.steps() == 1);
  CHECK_FALSE(params_equal(agent.online(), agent.target()));
  agent.train_step();  // step 2
  CHECK_FALSE(params_equal(agent.online(), agent.target()));
  agent.train_step();  // step 3: sync point
  CHECK(params_equal(agent.online(), agent.target()));
  agent.train_step();  // step 4: drifts apart again
  CHECK_FALSE(params_equal(agent.online(), agent.target()));
}

TEST_CASE("identical seeds and data give bit-identical training") {
  auto run = [] {
    DqnAgent agent(cfrlab::nn::NetworkSpec{{2, 16, 2}, 5}, small_config(11));
    Rng rng(21);
    for (int i = 0; i < 40; ++i) {
      Transition t = make_transition(rng.uniform01(), int(rng.uniform_int(2)));
      t.reward = rng.uniform(-1, 1);
      agent.add_transition(std::move(t));
    }
    for (int i = 0; i < 100; ++i) agent.train_step();
    return agent;
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.steps() == b.steps());
  CHECK(params_equal(a.online(), b.online()));
  CHECK(params_equal(a.target(), b.target()));
}

TEST_CASE("agent checkpoints round-trip") {
  const std::string path = "agent_ckpt_roundtrip.txt";
  auto config = small_config(6);
  DqnAgent agent(cfrlab::nn::NetworkSpec{{2, 8, 8, 2}, 13}, config);
  for (int i = 0; i < 16; ++i) agent.add_transition(make_transition(i * 0.1, i % 2));
  for (int i = 0; i < 25; ++i) agent.train_step();
  agent.save(path);

  const auto loaded = DqnAgent::load(path, config);
  CHECK(loaded.steps() == agent.steps());
  CHECK(params_equal(loaded.online(), agent.online()));
  CHECK(params_equal(loaded.target(), agent.target()));
  const std::array obs{0.4, 0.6};
  CHECK(loaded.greedy_action(obs) == agent.greedy_action(obs));
  std::remove(path.c_str());

  CHECK_THROWS_AS(DqnAgent::load("no_such_checkpoint.txt"), cfrlab::IoError);
}

TEST_CASE("q-learning recovers the optimal values of a two-step chain") {
  // Deterministic chain: state s0 = (1,0), state s1 = (0,1). From s0 either
  // action moves to s1 with rewards (0.2, -0.4); from s1 the episode ends
  // with rewards (1.0, 0.3). Optimal values: Q*(s1) = (1.0, 0.3);
  // Q*(s0, a) = r0(a) + discount * 1.0.
  const std::vector<double> s0{1.0, 0.0}, s1{0.0, 1.0};
  const double r0[2] = {0.2, -0.4}, r1[2] = {1.0, 0.3};
  DqnConfig config;
  config.batch_size = 32;
  config.replay_capacity = 256;
  config.discount = 0.9;
  config.learning_rate = 5e-3;
  config.target_sync_every = 100;
  config.seed = 4;
  DqnAgent agent(cfrlab::nn::NetworkSpec{{2, 32, 32, 2}, 4}, config);

  Rng behavior(8);
  auto add_episode = [&] {
    const int a0 = int(behavior.uniform_int(2));
    agent.add_transition({s0, a0, r0[a0], s1, false});
    const int a1 = int(behavior.uniform_int(2));
    agent.add_transition({s1, a1, r1[a1], s0, true});
  };
  for (int i = 0; i < 64; ++i) add_episode();
  for (int step = 0; step < 6000; ++step) {
    add_episode();
    REQUIRE(agent.train_step().has_value());
  }

  const auto q0 = agent.qvalues(s0);
  const auto q1 = agent.qvalues(s1);
  CHECK(q1[0] == doctest::Approx(1.0).epsilon(0.05));
  CHECK(q1[1] == doctest::Approx(0.3).epsilon(0.17));
  CHECK(q0[0] == doctest::Approx(0.2 + 0.9 * 1.0).epsilon(0.05));
  CHECK(q0[1] == doctest::Approx(-0.4 + 0.9 * 1.0).epsilon(0.1));
  CHECK(agent.greedy_action(s0) == 0);
  CHECK(agent.greedy_action(s1) == 0);
}
