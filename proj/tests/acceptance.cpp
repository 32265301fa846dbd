// Acceptance gate, fast half: every case prints one PASS/FAIL line so the
// suite output doubles as the release checklist. The slow statistical
// criteria live in acceptance_nightly.cpp.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>

#include "cfrlab/agent.hpp"
#include "cfrlab/env.hpp"
#include "cfrlab/metrics.hpp"
#include "cfrlab/rng.hpp"
#include "test_support.hpp"

using namespace cfrlab;
using cfr::RuleKind;
using cfr::Solver;
using cfr::UpdateRule;
using games::CompiledTree;
using games::Game;
using testsupport::KeyProfile;

namespace {

struct Criterion {
  const char* name;
  bool ok = true;
  explicit Criterion(const char* n) : name(n) {}
  ~Criterion() {
    // An exception unwinding past the criterion is a failure too.
    const bool passed = ok && std::uncaught_exceptions() == 0;
    std::printf("[acceptance] %s: %s\n", name, passed ? "PASS" : "FAIL");
  }
  void require(bool condition) {
    CHECK(condition);
    ok = ok && condition;
  }
};

KeyProfile merge(KeyProfile a, const KeyProfile& b) {
  a.insert(b.begin(), b.end());
  return a;
}

bool params_equal(const nn::NetworkParams& a, const nn::NetworkParams& b) {
  if (!a.same_shape(b)) return false;
  for (size_t l = 0; l < a.layers.size(); ++l)
    if (a.layers[l].w != b.layers[l].w || a.layers[l].b != b.layers[l].b) return false;
  return true;
}

}  // namespace

TEST_CASE("criterion 1: strategies are probability distributions for all rules") {
  Criterion crit("1 distribution validity");
  Rng rng(1001);
  std::vector<double> regret, out;
  for (int k = 0; k < cfr::kNumRules; ++k) {
    const auto rule = UpdateRule::preset(static_cast<RuleKind>(k));
    for (int trial = 0; trial < 10000; ++trial) {
      const size_t n = 2 + rng.uniform_int(2);  // 2 or 3 actions
      regret.resize(n);
      out.resize(n);
      for (auto& r : regret) r = rng.uniform(-10.0, 10.0);
      if (trial % 7 == 0)
        for (auto& r : regret) r = -std::abs(r);  // exercise the uniform fallback
      cfr::current_strategy(rule, regret, out);
      double total = 0;
      bool entries_ok = true;
      for (double p : out) {
        entries_ok = entries_ok && p >= 0.0 && p <= 1.0;
        total += p;
      }
      // One aggregated check per trial keeps the assertion count sane.
      if (!entries_ok || std::abs(total - 1.0) > 1e-12) crit.require(false);
    }
  }
  crit.require(true);
}

TEST_CASE("criterion 2: best-response oracle agreement on the smallest game") {
  Criterion crit("2 best-response oracle");
  Game g(games::kuhn_spec());
  CompiledTree tree(g);

  const auto nash =
      testsupport::profile_from_keys(tree, merge(testsupport::kuhn_nash_p0(),
                                                 testsupport::kuhn_nash_p1()));
  crit.require(metrics::exploitability(tree, nash).exploitability <= 1e-9);

  const auto uniform0 = testsupport::uniform_key_profile(g, 0);
  const auto uniform1 = testsupport::uniform_key_profile(g, 1);
  const auto uniform = cfr::StrategyProfile::uniform(tree);
  const double oracle = (testsupport::brute_force_best_response(g, uniform1, 0) +
                         testsupport::brute_force_best_response(g, uniform0, 1)) /
                        2.0;
  crit.require(std::abs(metrics::exploitability(tree, uniform).exploitability - oracle) <= 1e-12);
}

TEST_CASE("criterion 3: convergence under the regret bound, plus pinned regression") {
  Criterion crit("3 convergence bound");
  Game g(games::kuhn_spec());
  CompiledTree tree(g);
  const double delta = metrics::payoff_range(tree);
  const int num_infosets = tree.num_infosets();  // 12 on this game
  crit.require(num_infosets == 12);

  for (RuleKind kind : {RuleKind::kA1, RuleKind::kA2, RuleKind::kA3, RuleKind::kA5}) {
    const auto rule = UpdateRule::preset(kind);
    Solver solver(tree);
    std::map<int, double> e_at;
    for (int target : {10, 100, 1000, 10000}) {
      while (solver.iterations() < target) solver.iteration(rule);
      const double e = metrics::exploitability(tree, solver.average_profile()).exploitability;
      e_at[target] = e;
      crit.require(e <= metrics::theorem1_bound(target, delta, num_infosets, 2));
    }
    crit.require(e_at[10000] < e_at[1000]);
    crit.require(e_at[1000] < e_at[100]);
    if (kind == RuleKind::kA5) crit.require(e_at[10000] <= 0.01);
  }
}

TEST_CASE("criterion 4: analytic gradients agree with finite differences") {
  Criterion crit("4 gradient correctness");
  Rng rng(4004);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = nn::NetworkSpec{{4, 8, 8, 3}, 100 + uint64_t(trial)};
    auto params = nn::init(spec);
    std::vector<double> input(4);
    for (auto& v : input) v = rng.uniform(-1.0, 1.0);
    const int action = int(rng.uniform_int(3));
    const double target = rng.uniform(-2.0, 2.0);

    auto grad = nn::zeros_like(spec);
    nn::backward(params, input, action, target, grad);

    const double eps = 1e-5;
    bool all_ok = true;
    for (size_t l = 0; l < params.layers.size(); ++l) {
      auto check = [&](double& p, double analytic) {
        const double saved = p;
        p = saved + eps;
        const double up = nn::mse_loss(nn::forward(params, input), action, target);
        p = saved - eps;
        const double down = nn::mse_loss(nn::forward(params, input), action, target);
        p = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        if (std::abs(analytic - numeric) / scale > 1e-4) all_ok = false;
      };
      for (size_t i = 0; i < params.layers[l].w.size(); ++i)
        check(params.layers[l].w[i], grad.layers[l].w[i]);
      for (size_t i = 0; i < params.layers[l].b.size(); ++i)
        check(params.layers[l].b[i], grad.layers[l].b[i]);
    }
    crit.require(all_ok);
  }
}

TEST_CASE("criterion 5: q-learning matches value iteration on a two-state process") {
  Criterion crit("5 dqn sanity");
  // Two states, two actions, deterministic transitions, discount 0.9:
  //   s0: action 0 stays (reward 0.1); action 1 moves to s1 (reward 0).
  //   s1: action 0 moves to s0 (reward 1); action 1 stays (reward 0.2).
  const double discount = 0.9;
  const double reward[2][2] = {{0.1, 0.0}, {1.0, 0.2}};
  const int next_state[2][2] = {{0, 1}, {0, 1}};

  double qstar[2][2] = {};
  for (int sweep = 0; sweep < 2000; ++sweep)
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) {
        const int ns = next_state[s][a];
        qstar[s][a] = reward[s][a] + discount * std::max(qstar[ns][0], qstar[ns][1]);
      }

  const std::vector<double> obs[2] = {{1.0, 0.0}, {0.0, 1.0}};
  int passed = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    agent::DqnConfig config;
    config.batch_size = 32;
    config.replay_capacity = 512;
    config.discount = discount;
    config.learning_rate = 5e-3;
    config.target_sync_every = 100;
    config.seed = seed;
    agent::DqnAgent ag(nn::NetworkSpec{{2, 32, 32, 2}, seed}, config);

    Rng behavior(900 + seed);
    int s = 0;
    auto explore = [&] {
      const int a = int(behavior.uniform_int(2));
      const int ns = next_state[s][a];
      ag.add_transition({obs[s], a, reward[s][a], obs[ns], false});
      s = ns;
    };
    for (int i = 0; i < 64; ++i) explore();
    for (int step = 0; step < 5000; ++step) {
      explore();
      ag.train_step();
    }

    double max_err = 0;
    for (int state = 0; state < 2; ++state) {
      const auto q = ag.qvalues(obs[state]);
      for (int a = 0; a < 2; ++a)
        max_err = std::max(max_err, std::abs(q[a] - qstar[state][a]));
    }
    if (max_err < 0.05) ++passed;
  }
  crit.require(passed >= 4);
}

TEST_CASE("criterion 6: replay, target-sync, and reward mechanism fidelity") {
  Criterion crit("6 mechanism fidelity");
  // FIFO at the documented capacity.
  agent::ReplayBuffer buf;  // default capacity
  crit.require(buf.capacity() == 2000);
  for (int i = 0; i < 2001; ++i) {
    agent::Transition t;
    t.state = {double(i)};
    t.next_state = {0.0};
    buf.push(std::move(t));
  }
  crit.require(buf.size() == 2000);
  crit.require(buf.oldest(0).state[0] == 1.0);        // the very first entry was evicted
  crit.require(buf.oldest(1999).state[0] == 2000.0);  // the newest survives

  // Target refresh exactly every 200 gradient steps.
  agent::DqnConfig config;
  config.batch_size = 8;
  config.replay_capacity = 64;
  config.seed = 6;
  crit.require(config.target_sync_every == 200);
  agent::DqnAgent ag(nn::NetworkSpec{{2, 8, 2}, 6}, config);
  Rng rng(66);
  for (int i = 0; i < 16; ++i)
    ag.add_transition({{rng.uniform01(), rng.uniform01()},
                       int(rng.uniform_int(2)),
                       rng.uniform(-1, 1),
                       {rng.uniform01(), rng.uniform01()},
                       true});
  bool sync_ok = true;
  for (int step = 1; step <= 400; ++step) {
    ag.train_step();
    const bool synced = params_equal(ag.online(), ag.target());
    if (step % 200 == 0 ? !synced : synced) sync_ok = false;
  }
  crit.require(sync_ok);

  // Terminal TD target collapses to the raw reward; R2 worked example.
  const std::array next_q{5.0, -1.0};
  crit.require(agent::td_target(0.75, true, next_q, 0.99) == 0.75);
  crit.require(agent::td_target(0.75, false, next_q, 0.99) == 0.75 + 0.99 * 5.0);
  crit.require(env::reward_r2(0.5, 0.3) == doctest::Approx(0.2));
}

TEST_CASE("criterion 7: env episodes reproduce standalone solves bit-identically") {
  Criterion crit("7 env/baseline equivalence");
  const int T = 1000;
  Game g(games::kuhn_spec());
  CompiledTree tree(g);
  metrics::BestResponder responder(tree);
  for (int action = 0; action < cfr::kNumRules; ++action) {
    env::EnvConfig config;
    config.game = "kuhn";
    config.reward_kind = env::RewardKind::kR1;
    config.max_steps = T;
    env::CfrEnv e(config);

    Solver solver(tree);
    const auto rule = UpdateRule::preset(static_cast<RuleKind>(action));
    bool identical = true;
    for (int t = 1; t <= T; ++t) {
      const auto out = e.step(action);
      solver.iteration(rule);
      const auto profile = solver.average_profile();
      const double standalone = (responder.best_response_value(profile, 0) +
                                 responder.best_response_value(profile, 1)) /
                                2.0;
      if (out.exploitability != standalone) identical = false;
    }
    crit.require(identical);
    crit.require(e.done());
  }
}
