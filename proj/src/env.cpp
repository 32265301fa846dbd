#include "cfrlab/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "cfrlab/rng.hpp"

namespace cfrlab::env {

RewardKind reward_from_name(const std::string& name) {
  if (name == "r1") return RewardKind::kR1;
  if (name == "r2") return RewardKind::kR2;
  if (name == "r3") return RewardKind::kR3;
  throw UsageError("unknown reward '" + name + "' (valid: r1, r2, r3)");
}

std::string reward_name(RewardKind kind) {
  switch (kind) {
    case RewardKind::kR1: return "r1";
    case RewardKind::kR2: return "r2";
    case RewardKind::kR3: return "r3";
  }
  return "?";
}

void EnvConfig::validate() const {
  if (max_steps < 1) throw ConfigError("env max_steps must be >= 1");
  if (decision_interval < 1) throw ConfigError("env decision_interval must be >= 1");
  if (discount <= 0 || discount > 1) throw ConfigError("env discount must be in (0, 1]");
}

const std::array<cfr::RuleKind, 4> BaselineCurves::kBaselineRules = {
    cfr::RuleKind::kA5, cfr::RuleKind::kA2, cfr::RuleKind::kA3, cfr::RuleKind::kA4};

BaselineCurves BaselineCurves::load(const std::string& path, const std::string& game,
                                    int need_iters) {
  std::ifstream is(path);
  if (!is) throw ConfigError("baseline curves file '" + path +
                             "' not found; run the build-curves command first");
  std::string line;
  if (!std::getline(is, line) || line != "game,rule,iteration,exploitability")
    throw IoError("baseline curves file '" + path + "': bad header");
  std::map<int, double> min_rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string g, rule, it_s, e_s;
    if (!std::getline(ls, g, ',') || !std::getline(ls, rule, ',') ||
        !std::getline(ls, it_s, ',') || !std::getline(ls, e_s))
      throw IoError("baseline curves file '" + path + "': malformed row");
    if (g != game || rule != "min") continue;
    min_rows[std::stoi(it_s)] = std::stod(e_s);
  }
  BaselineCurves c;
  c.min_curve_.reserve(min_rows.size());
  for (int t = 1; t <= need_iters; ++t) {
    auto it = min_rows.find(t);
    if (it == min_rows.end())
      throw ConfigError("baseline curves for game '" + game + "' do not cover iteration " +
                        std::to_string(t) + " (need [1, " + std::to_string(need_iters) + "])");
    c.min_curve_.push_back(it->second);
  }
  return c;
}

void BaselineCurves::build(const games::GameSpec& spec, int iters, int repeats,
                           const std::string& out_path) {
  if (iters < 1) throw ContractViolation("build requires iters >= 1");
  games::Game game(spec);
  games::CompiledTree tree(game);
  metrics::BestResponder responder(tree);
  std::vector<std::vector<double>> traces;
  std::vector<std::string> names;
  for (cfr::RuleKind kind : kBaselineRules) {
    const auto rule = cfr::UpdateRule::preset(kind);
    std::vector<double> trace;
    for (int rep = 0; rep < std::max(repeats, 1); ++rep) {
      cfr::Solver solver(tree);
      std::vector<double> run;
      run.reserve(iters);
      for (int t = 1; t <= iters; ++t) {
        solver.iteration(rule);
        const auto profile = solver.average_profile();
        run.push_back((responder.best_response_value(profile, 0) +
                       responder.best_response_value(profile, 1)) /
                      2.0);
      }
      if (rep == 0)
        trace = std::move(run);
      else if (run != trace)
        throw TrainingError("baseline solve was not deterministic across repeats");
    }
    traces.push_back(std::move(trace));
    names.push_back(cfr::rule_name(kind));
  }
  std::ofstream os(out_path);
  if (!os) throw IoError("cannot open '" + out_path + "' for writing");
  os << "game,rule,iteration,exploitability\n" << std::setprecision(17);
  const char* aliases[] = {"vanilla", "lcfr", "dcfr", "ecfr"};
  for (size_t r = 0; r < traces.size(); ++r)
    for (int t = 1; t <= iters; ++t)
      os << spec.name << ',' << aliases[r] << ',' << t << ',' << traces[r][t - 1] << '\n';
  for (int t = 1; t <= iters; ++t) {
    double m = traces[0][t - 1];
    for (size_t r = 1; r < traces.size(); ++r) m = std::min(m, traces[r][t - 1]);
    os << spec.name << ",min," << t << ',' << m << '\n';
  }
  if (!os) throw IoError("write failure on '" + out_path + "'");
}

double BaselineCurves::min_at(int iteration) const {
  if (iteration < 1 || iteration > coverage())
    throw ContractViolation("baseline curve iteration out of range");
  return min_curve_[iteration - 1];
}

double reward_r1(double e_prev, double e_curr) {
  return e_prev - e_curr > 0 ? 1.0 : -1.0;
}

double reward_r2(double e_baseline_min, double e_curr) {
  return e_baseline_min - e_curr;
}

double reward_r3(double e_baseline_min, double e_curr, double slope_prev, double slope_curr) {
  if (e_baseline_min == 0) throw ConfigError("degenerate baseline: zero exploitability");
  const double gap = (e_baseline_min - e_curr) / e_baseline_min;
  double r = gap;
  if (e_baseline_min - e_curr < 0 && slope_curr - slope_prev > 0)
    r = 1.0 / (slope_curr - slope_prev);
  // The inverse-slope bonus is unbounded as the slope delta vanishes, which
  // destabilizes TD targets; clip to keep training losses finite.
  return std::clamp(r, -kR3RewardCap, kR3RewardCap);
}

double episode_return(std::span<const double> rewards, double discount) {
  if (discount <= 0 || discount > 1) throw ContractViolation("discount must be in (0, 1]");
  double acc = 0;
  double w = 1;
  for (double r : rewards) {
    acc += w * r;
    w *= discount;
  }
  return acc;
}

CfrEnv::CfrEnv(EnvConfig config)
    : config_(std::move(config)), game_(games::spec_by_name(config_.game)) {
  config_.validate();
  tree_ = std::make_unique<games::CompiledTree>(game_);
  responder_ = std::make_unique<metrics::BestResponder>(*tree_);
  if (config_.reward_kind != RewardKind::kR1) {
    if (config_.baseline_curve_path.empty())
      throw ConfigError("reward " + reward_name(config_.reward_kind) +
                        " requires a baseline curves file");
    curves_ = std::make_unique<BaselineCurves>(
        BaselineCurves::load(config_.baseline_curve_path, config_.game, config_.max_steps));
  }
  reset();
}

int CfrEnv::total_steps() const {
  return (config_.max_steps + config_.decision_interval - 1) / config_.decision_interval;
}

Observation CfrEnv::reset() {
  solver_ = std::make_unique<cfr::Solver>(*tree_, config_.solver);
  steps_ = 0;
  done_ = false;
  started_ = true;
  slope_prev_ = 0;
  for (auto& snap : window_) snap.fill(0.0);
  if (config_.randomize_init) {
    Rng rng(config_.init_seed);
    for (auto& snap : window_)
      for (auto& v : snap) v = rng.uniform01();
  }
  e_prev_ = measure();
  Observation obs;
  for (int i = 0; i < 3; ++i)
    std::copy(window_[i].begin(), window_[i].end(), obs.begin() + i * kSnapshotDim);
  return obs;
}

StepOutcome CfrEnv::step(int action) {
  if (!started_ || done_) throw ContractViolation("step on a finished episode");
  if (action < 0 || action >= cfr::kNumRules)
    throw ContractViolation("action index out of range");
  last_rule_ = cfr::UpdateRule::preset(static_cast<cfr::RuleKind>(action));
  const int k = std::min(config_.decision_interval, config_.max_steps - solver_->iterations());
  for (int i = 0; i < k; ++i) solver_->iteration(last_rule_);
  const int t = solver_->iterations();

  StepOutcome out;
  out.rule_index = action;
  out.iteration = t;
  out.exploitability = measure();
  const double slope_curr = (e_prev_ - out.exploitability) / k;
  switch (config_.reward_kind) {
    case RewardKind::kR1:
      out.reward = reward_r1(e_prev_, out.exploitability);
      break;
    case RewardKind::kR2:
      out.reward = reward_r2(curves_->min_at(t), out.exploitability);
      break;
    case RewardKind::kR3:
      out.reward = reward_r3(curves_->min_at(t), out.exploitability, slope_prev_, slope_curr);
      break;
  }
  slope_prev_ = slope_curr;
  e_prev_ = out.exploitability;

  window_[0] = window_[1];
  window_[1] = window_[2];
  window_[2] = snapshot_stats();
  for (int i = 0; i < 3; ++i)
    std::copy(window_[i].begin(), window_[i].end(), out.observation.begin() + i * kSnapshotDim);

  ++steps_;
  done_ = t >= config_.max_steps;
  out.done = done_;
  return out;
}

namespace {
// Symmetric log compression: cumulative regrets grow polynomially in t under
// some rules, and raw magnitudes destabilize the Q-network.
double squash(double x) { return x >= 0 ? std::log1p(x) : -std::log1p(-x); }
}  // namespace

std::array<double, kSnapshotDim> CfrEnv::snapshot_stats() const {
  const auto regrets = solver_->cumulative_regrets();
  const auto instants = solver_->last_instant_regrets();
  const auto n = static_cast<double>(regrets.size());
  double mean = 0, max_pos = 0, min_r = regrets.empty() ? 0.0 : regrets[0];
  for (double r : regrets) {
    mean += r;
    max_pos = std::max(max_pos, r);
    min_r = std::min(min_r, r);
  }
  mean /= n;
  max_pos = std::max(max_pos, 0.0);
  double var = 0;
  for (double r : regrets) var += (r - mean) * (r - mean);
  double mean_pos_inst = 0;
  for (double r : instants) mean_pos_inst += std::max(r, 0.0);
  return {squash(mean),
          squash(std::sqrt(var / n)),
          squash(max_pos),
          squash(min_r),
          squash(mean_pos_inst / n),
          std::log1p(static_cast<double>(solver_->iterations()))};
}

double CfrEnv::measure() const {
  cfr::StrategyProfile profile =
      (config_.measure_current && solver_->iterations() > 0)
          ? solver_->current_profile(last_rule_)
          : solver_->average_profile();
  return (responder_->best_response_value(profile, 0) +
          responder_->best_response_value(profile, 1)) /
         2.0;
}

}  // namespace cfrlab::env
