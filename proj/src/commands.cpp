#include "cfrlab/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "cfrlab/metrics.hpp"
#include "cfrlab/report.hpp"

namespace cfrlab::cli {

namespace fs = std::filesystem;

namespace {

class WallClock {
 public:
  long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

// Full logging through t = 1000, then one point per leading-two-digits step.
bool log_iteration(int t, bool log_spaced) {
  if (!log_spaced || t <= 1000) return true;
  int step = 1;
  while (t / step >= 100) step *= 10;
  return t % step == 0;
}

}  // namespace

std::string cmd_baseline(const BaselineArgs& args) {
  const auto rule = cfr::rule_from_name(args.rule);
  games::Game game(games::spec_by_name(args.game));
  games::CompiledTree tree(game);
  cfr::Solver::Options opts;
  opts.linear_avg_weight = args.linear_avg_weight;
  opts.alternating = !args.simultaneous;
  cfr::Solver solver(tree, opts);
  metrics::BestResponder responder(tree);
  ensure_dir(args.out_dir);
  WallClock clock;
  std::vector<report::ResultRow> rows;
  for (int t = 1; t <= args.iters; ++t) {
    solver.iteration(rule);
    if (!log_iteration(t, args.log_spaced)) continue;
    const auto profile = solver.average_profile();
    const double e = (responder.best_response_value(profile, 0) +
                      responder.best_response_value(profile, 1)) /
                     2.0;
    rows.push_back({args.game, cfr::rule_name(rule.kind), args.seed, t, e, clock.ms()});
  }
  const std::string path = args.out_dir + "/baseline_" + args.game + "_" +
                           cfr::rule_name(rule.kind) + "_seed" + std::to_string(args.seed) +
                           ".csv";
  report::write_results_csv(path, rows);
  return path;
}

void cmd_build_curves(const BuildCurvesArgs& args) {
  const auto spec = games::spec_by_name(args.game);
  std::string out = args.out_path;
  if (out.empty()) out = curves_path(".", args.game);
  if (auto parent = fs::path(out).parent_path(); !parent.empty())
    ensure_dir(parent.string());
  env::BaselineCurves::build(spec, args.iters, args.repeats, out);
}

std::string curves_path(const std::string& dir, const std::string& game) {
  return dir + "/curves_" + game + ".csv";
}

std::vector<std::string> cmd_train(const TrainArgs& args) {
  if (args.games.empty()) throw UsageError("train requires at least one game");
  const auto reward = env::reward_from_name(args.reward);
  ensure_dir(args.out_dir);

  // Environments are rebuilt per episode but the compiled trees are heavy;
  // validate curve coverage up front so failures name the fix.
  std::vector<env::EnvConfig> env_configs;
  for (const auto& g : args.games) {
    env::EnvConfig ec;
    ec.game = g;
    ec.max_steps = args.episode_iters;
    ec.reward_kind = reward;
    ec.baseline_curve_path = curves_path(args.curves_dir, g);
    if (reward != env::RewardKind::kR1 && !fs::exists(ec.baseline_curve_path))
      throw ConfigError("missing baseline curves '" + ec.baseline_curve_path +
                        "'; run: cfrlab build-curves --game " + g + " --iters " +
                        std::to_string(args.episode_iters));
    env_configs.push_back(std::move(ec));
  }

  std::vector<std::string> checkpoints;
  for (uint64_t seed : args.seeds) {
    agent::DqnConfig dqn = args.dqn;
    dqn.seed = seed;
    dqn.train_steps = args.steps;
    agent::DqnAgent ag(nn::qnetwork_spec(seed), dqn);

    const std::string log_path =
        args.out_dir + "/train_seed" + std::to_string(seed) + ".csv";
    std::ofstream log(log_path);
    if (!log) throw IoError("cannot open '" + log_path + "' for writing");
    log << "step,episode,loss,epsilon,reward,action\n" << std::setprecision(17);

    std::vector<std::unique_ptr<env::CfrEnv>> envs;
    for (const auto& ec : env_configs) envs.push_back(std::make_unique<env::CfrEnv>(ec));

    const std::string ckpt_base = args.out_dir + "/ckpt_seed" + std::to_string(seed);
    int total = 0;
    int episode = 0;
    while (total < args.steps) {
      env::CfrEnv& e = *envs[episode % envs.size()];
      std::vector<double> obs_v;
      auto obs = e.reset();
      obs_v.assign(obs.begin(), obs.end());
      while (!e.done() && total < args.steps) {
        const double eps = ag.config().epsilon_at(ag.steps());
        const int action = ag.select_action(obs_v, eps);
        const auto out = e.step(action);
        agent::Transition tr;
        tr.state = obs_v;
        tr.action = action;
        tr.reward = out.reward;
        tr.next_state.assign(out.observation.begin(), out.observation.end());
        tr.done = out.done;
        ag.add_transition(std::move(tr));
        const auto loss = ag.train_step();
        ++total;
        log << total << ',' << episode << ',' << (loss ? *loss : 0.0) << ',' << eps << ','
            << out.reward << ',' << action << '\n';
        obs_v.assign(out.observation.begin(), out.observation.end());
        if (args.checkpoint_every > 0 && total % args.checkpoint_every == 0)
          ag.save(ckpt_base + "_step" + std::to_string(total) + ".txt");
      }
      ++episode;
    }
    const std::string final_path = ckpt_base + ".txt";
    ag.save(final_path);
    checkpoints.push_back(final_path);
    if (!log) throw IoError("write failure on '" + log_path + "'");
  }
  return checkpoints;
}

std::string cmd_eval(const EvalArgs& args) {
  agent::DqnAgent ag = agent::DqnAgent::load(args.checkpoint);
  if (ag.net_spec().layer_dims.front() != env::kObsDim)
    throw ConfigError("checkpoint observation dimension " +
                      std::to_string(ag.net_spec().layer_dims.front()) +
                      " does not match the environment's " + std::to_string(env::kObsDim));
  env::EnvConfig ec;
  ec.game = args.game;
  ec.max_steps = args.iters;
  ec.reward_kind = env::RewardKind::kR1;  // greedy evaluation needs no baseline
  ec.measure_current = args.measure_current;
  env::CfrEnv e(ec);
  ensure_dir(args.out_dir);

  const std::string suffix = args.game + "_seed" + std::to_string(args.seed);
  std::ofstream actions(args.out_dir + "/eval_" + suffix + "_actions.csv");
  if (!actions) throw IoError("cannot write eval action log");
  actions << "step,iteration,rule\n";

  WallClock clock;
  std::vector<report::ResultRow> rows;
  auto obs = e.reset();
  std::vector<double> obs_v(obs.begin(), obs.end());
  int step = 0;
  while (!e.done()) {
    const int action = ag.greedy_action(obs_v);
    const auto out = e.step(action);
    ++step;
    rows.push_back(
        {args.game, "rlcfr", args.seed, out.iteration, out.exploitability, clock.ms()});
    actions << step << ',' << out.iteration << ','
            << cfr::rule_name(static_cast<cfr::RuleKind>(out.rule_index)) << '\n';
    obs_v.assign(out.observation.begin(), out.observation.end());
  }
  const std::string path = args.out_dir + "/eval_" + suffix + ".csv";
  report::write_results_csv(path, rows);
  return path;
}

void cmd_compare(const CompareArgs& args) {
  if (args.inputs.empty()) throw UsageError("compare requires at least one input CSV");
  std::vector<std::string> missing;
  for (const auto& p : args.inputs)
    if (!fs::exists(p)) missing.push_back(p);
  if (!missing.empty()) {
    std::string msg = "missing input files:";
    for (const auto& p : missing) msg += " " + p;
    throw IoError(msg);
  }
  std::vector<report::ResultRow> rows;
  for (const auto& p : args.inputs) {
    auto part = report::read_results_csv(p);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  ensure_dir(args.out_dir);
  report::write_results_csv(args.out_dir + "/compare_rows.csv", rows);

  const auto means = report::aggregate_means(rows);
  for (const auto& [game, methods] : means) {
    const std::string mean_path = args.out_dir + "/compare_means_" + game + ".csv";
    std::ofstream os(mean_path);
    if (!os) throw IoError("cannot open '" + mean_path + "' for writing");
    os << "game,method,iteration,mean_exploitability\n" << std::setprecision(17);
    std::vector<report::Series> series;
    for (const auto& [method, pts] : methods) {
      for (auto [it, e] : pts)
        os << game << ',' << method << ',' << static_cast<int>(it) << ',' << e << '\n';
      series.push_back({method, pts});
    }
    if (!os) throw IoError("write failure on '" + mean_path + "'");
    if (args.svg)
      report::write_svg_chart(args.out_dir + "/compare_" + game + ".svg",
                              "Exploitability on " + game, "iteration", "exploitability",
                              series);
  }
}

}  // namespace cfrlab::cli
