#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfrlab/agent.hpp"
#include "cfrlab/env.hpp"

namespace cfrlab::cli {

struct BaselineArgs {
  std::string game = "kuhn";
  std::string rule = "vanilla";
  int iters = 1000;
  uint64_t seed = 1;
  std::string out_dir = ".";
  bool log_spaced = false;  // thin the per-iteration log above t = 1000
  bool linear_avg_weight = false;
  bool simultaneous = false;
};
std::string cmd_baseline(const BaselineArgs& args);  // returns the CSV path

struct BuildCurvesArgs {
  std::string game = "kuhn";
  int iters = 1000;
  int repeats = 1;
  std::string out_path;
};
void cmd_build_curves(const BuildCurvesArgs& args);

// Conventional curves filename inside a directory.
std::string curves_path(const std::string& dir, const std::string& game);

struct TrainArgs {
  std::vector<std::string> games = {"kuhn", "leduc"};
  std::string reward = "r2";
  int steps = 20000;
  std::vector<uint64_t> seeds = {1};
  std::string curves_dir = ".";
  std::string out_dir = ".";
  int episode_iters = 1000;
  int checkpoint_every = 1000;
  agent::DqnConfig dqn;
};
// Returns the final checkpoint path per seed.
std::vector<std::string> cmd_train(const TrainArgs& args);

struct EvalArgs {
  std::string checkpoint;
  std::string game = "kuhn";
  int iters = 10000;
  uint64_t seed = 1;
  std::string out_dir = ".";
  bool measure_current = false;
};
std::string cmd_eval(const EvalArgs& args);  // returns the results CSV path

struct CompareArgs {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  bool svg = true;
};
void cmd_compare(const CompareArgs& args);

}  // namespace cfrlab::cli
