// Command-line entry point: baseline solves, baseline-curve construction,
// agent training/evaluation, and cross-method comparison reports.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cfrlab/commands.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<uint64_t> split_seeds(const std::string& csv) {
  std::vector<uint64_t> out;
  for (const auto& s : split_list(csv)) out.push_back(std::stoull(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CFR solver workbench with a learned update-rule controller"};
  app.set_config("--config", "", "flat key=value config file; command-line flags win");
  app.require_subcommand(1);

  cfrlab::cli::BaselineArgs bl;
  auto* baseline = app.add_subcommand("baseline", "run a fixed-rule CFR solve");
  baseline->add_option("--game", bl.game, "game preset (kuhn, leduc, royal)");
  baseline->add_option("--rule", bl.rule, "update rule (a1..a7 or alias)");
  baseline->add_option("--iters", bl.iters, "CFR iterations");
  baseline->add_option("--seed", bl.seed, "seed label for the result rows");
  baseline->add_option("--out", bl.out_dir, "output directory");
  baseline->add_flag("--log-spaced", bl.log_spaced, "thin the log above iteration 1000");
  baseline->add_flag("--linear-avg-weight", bl.linear_avg_weight,
                     "weight average-strategy updates by t");
  baseline->add_flag("--simultaneous", bl.simultaneous,
                     "simultaneous instead of alternating updates");

  cfrlab::cli::BuildCurvesArgs bc;
  auto* curves = app.add_subcommand("build-curves",
                                    "record the fixed-rule baseline exploitability curves");
  curves->add_option("--game", bc.game, "game preset");
  curves->add_option("--iters", bc.iters, "CFR iterations");
  curves->add_option("--repeats", bc.repeats, "consistency-check repeats");
  curves->add_option("--out", bc.out_path, "output file (default curves_<game>.csv)");

  cfrlab::cli::TrainArgs tr;
  std::string train_games = "kuhn,leduc", train_seeds = "1";
  auto* train = app.add_subcommand("train", "train the update-rule selection agent");
  train->add_option("--games", train_games, "comma-separated training games");
  train->add_option("--reward", tr.reward, "reward function (r1, r2, r3)");
  train->add_option("--steps", tr.steps, "total training steps");
  train->add_option("--seeds", train_seeds, "comma-separated seeds");
  train->add_option("--curves", tr.curves_dir, "directory holding curves_<game>.csv files");
  train->add_option("--out", tr.out_dir, "output directory");
  train->add_option("--episode-iters", tr.episode_iters, "CFR iterations per episode");
  train->add_option("--checkpoint-every", tr.checkpoint_every, "checkpoint cadence in steps");
  train->add_option("--dqn.lr", tr.dqn.learning_rate, "learning rate");
  train->add_option("--dqn.batch", tr.dqn.batch_size, "batch size");
  train->add_option("--dqn.epsilon", tr.dqn.epsilon, "exploration rate");
  train->add_option("--dqn.epsilon-final", tr.dqn.epsilon_final, "final epsilon when decaying");
  train->add_option("--dqn.epsilon-decay-steps", tr.dqn.epsilon_decay_steps,
                    "linear decay horizon (0 = constant)");
  train->add_option("--dqn.discount", tr.dqn.discount, "TD discount factor");
  train->add_option("--dqn.sync", tr.dqn.target_sync_every, "target sync period");
  train->add_option("--dqn.replay", tr.dqn.replay_capacity, "replay capacity");

  cfrlab::cli::EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "evaluate a trained agent greedily");
  eval->add_option("--checkpoint", ev.checkpoint, "agent checkpoint file")->required();
  eval->add_option("--game", ev.game, "game preset");
  eval->add_option("--iters", ev.iters, "CFR iterations");
  eval->add_option("--seed", ev.seed, "seed label for the result rows");
  eval->add_option("--out", ev.out_dir, "output directory");
  eval->add_flag("--measure-current", ev.measure_current,
                 "measure the current profile instead of the average");

  cfrlab::cli::CompareArgs cp;
  std::string compare_inputs;
  auto* compare = app.add_subcommand("compare", "merge result CSVs into mean curves and SVGs");
  compare->add_option("--inputs", compare_inputs, "comma-separated result CSV files")
      ->required();
  compare->add_option("--out", cp.out_dir, "output directory");
  bool no_svg = false;
  compare->add_flag("--no-svg", no_svg, "skip SVG chart emission");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (baseline->parsed()) {
      std::cout << cfrlab::cli::cmd_baseline(bl) << '\n';
    } else if (curves->parsed()) {
      cfrlab::cli::cmd_build_curves(bc);
    } else if (train->parsed()) {
      tr.games = split_list(train_games);
      tr.seeds = split_seeds(train_seeds);
      for (const auto& path : cfrlab::cli::cmd_train(tr)) std::cout << path << '\n';
    } else if (eval->parsed()) {
      std::cout << cfrlab::cli::cmd_eval(ev) << '\n';
    } else if (compare->parsed()) {
      cp.inputs = split_list(compare_inputs);
      cp.svg = !no_svg;
      cfrlab::cli::cmd_compare(cp);
    }
  } catch (const cfrlab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cfrlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cfrlab::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
