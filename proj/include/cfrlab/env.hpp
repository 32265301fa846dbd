#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cfrlab/cfr.hpp"
#include "cfrlab/metrics.hpp"

namespace cfrlab::env {

enum class RewardKind { kR1, kR2, kR3 };

RewardKind reward_from_name(const std::string& name);  // r1/r2/r3, throws UsageError
std::string reward_name(RewardKind kind);

inline constexpr int kObsDim = 18;
inline constexpr int kSnapshotDim = 6;
using Observation = std::array<double, kObsDim>;

struct EnvConfig {
  std::string game = "kuhn";
  int max_steps = 1000;  // CFR iterations per episode (10000 for evaluation)
  RewardKind reward_kind = RewardKind::kR2;
  int decision_interval = 1;  // CFR iterations per rule choice
  bool measure_current = false;  // measure the current profile, not the average
  std::string baseline_curve_path;
  double discount = 0.99;  // for episode returns
  bool randomize_init = false;  // randomized initial observation window
  uint64_t init_seed = 0;
  cfr::Solver::Options solver;

  void validate() const;
};

// Pointwise minimum exploitability over the four fixed-rule baselines
// (vanilla a5, lcfr a2, dcfr a3, ecfr a4) per iteration.
class BaselineCurves {
 public:
  static const std::array<cfr::RuleKind, 4> kBaselineRules;

  // Loads the min curve for `game`, requiring coverage of [1, need_iters].
  static BaselineCurves load(const std::string& path, const std::string& game,
                             int need_iters);
  // Runs each baseline for `iters` iterations and writes the curves file
  // (per-rule rows plus the derived min rows). `repeats` re-runs are a
  // determinism consistency check.
  static void build(const games::GameSpec& spec, int iters, int repeats,
                    const std::string& out_path);

  double min_at(int iteration) const;  // 1-based
  int coverage() const { return static_cast<int>(min_curve_.size()); }

 private:
  std::vector<double> min_curve_;
};

struct StepOutcome {
  Observation observation{};
  double reward = 0;
  bool done = false;
  double exploitability = 0;
  int rule_index = 0;
  int iteration = 0;  // CFR iterations completed
};

double reward_r1(double e_prev, double e_curr);
double reward_r2(double e_baseline_min, double e_curr);
// Branches in printed order: relative gap when not behind the baseline,
// inverse slope improvement when the decay accelerated, relative gap
// otherwise. The result is clipped to +-kR3RewardCap (the inverse-slope
// branch is otherwise unbounded).
inline constexpr double kR3RewardCap = 10.0;
double reward_r3(double e_baseline_min, double e_curr, double slope_prev, double slope_curr);
double episode_return(std::span<const double> rewards, double discount);

// One solve wrapped as an episodic decision process: each step applies the
// chosen update rule for `decision_interval` CFR iterations, measures
// exploitability, and summarizes the last three regret snapshots into the
// observation.
class CfrEnv {
 public:
  explicit CfrEnv(EnvConfig config);

  Observation reset();
  StepOutcome step(int action);  // action in [0, 7)

  bool done() const { return done_; }
  int steps_taken() const { return steps_; }
  int total_steps() const;  // ceil(max_steps / decision_interval)
  const EnvConfig& config() const { return config_; }
  const games::CompiledTree& tree() const { return *tree_; }
  const cfr::Solver& solver() const { return *solver_; }
  double initial_exploitability() const { return e_prev_; }

 private:
  std::array<double, kSnapshotDim> snapshot_stats() const;
  double measure() const;

  EnvConfig config_;
  games::Game game_;
  std::unique_ptr<games::CompiledTree> tree_;
  std::unique_ptr<cfr::Solver> solver_;
  std::unique_ptr<metrics::BestResponder> responder_;
  std::unique_ptr<BaselineCurves> curves_;
  cfr::UpdateRule last_rule_;
  std::array<std::array<double, kSnapshotDim>, 3> window_{};
  int steps_ = 0;
  bool done_ = false;
  bool started_ = false;
  double e_prev_ = 0;
  double slope_prev_ = 0;
};

}  // namespace cfrlab::env
