#include "cfrlab/cfr.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cfrlab::cfr {

namespace {
constexpr double kNormEps = 1e-300;
constexpr int kMaxActions = 3;
}  // namespace

UpdateRule UpdateRule::preset(RuleKind kind) {
  UpdateRule r;
  r.kind = kind;
  if (kind == RuleKind::kA3) {
    r.alpha = 1.5;
    r.beta = 0.5;
    r.gamma_exp = 2.0;
  } else if (kind == RuleKind::kA4) {
    r.alpha = 0.5;
  }
  return r;
}

UpdateRule rule_from_name(const std::string& name) {
  static const std::pair<const char*, RuleKind> kNames[] = {
      {"a1", RuleKind::kA1},      {"a2", RuleKind::kA2},
      {"a3", RuleKind::kA3},      {"a4", RuleKind::kA4},
      {"a5", RuleKind::kA5},      {"a6", RuleKind::kA6},
      {"a7", RuleKind::kA7},      {"cfr+", RuleKind::kA1},
      {"lcfr", RuleKind::kA2},    {"dcfr", RuleKind::kA3},
      {"ecfr", RuleKind::kA4},    {"vanilla", RuleKind::kA5},
      {"pos-inst", RuleKind::kA6},{"uniform", RuleKind::kA7},
  };
  for (auto& [n, k] : kNames)
    if (name == n) return UpdateRule::preset(k);
  std::string valid;
  for (auto& [n, k] : kNames) valid += std::string(valid.empty() ? "" : ", ") + n;
  throw UsageError("unknown rule '" + name + "' (valid: " + valid + ")");
}

std::string rule_name(RuleKind kind) {
  static const char* kNames[] = {"a1", "a2", "a3", "a4", "a5", "a6", "a7"};
  return kNames[static_cast<int>(kind)];
}

std::vector<std::string> all_rule_names() {
  return {"a1", "a2", "a3", "a4", "a5", "a6", "a7",
          "cfr+", "lcfr", "dcfr", "ecfr", "vanilla", "pos-inst", "uniform"};
}

void regret_matching(std::span<const double> regret, std::span<double> out) {
  double total = 0;
  for (size_t i = 0; i < regret.size(); ++i) {
    out[i] = regret[i] > 0 ? regret[i] : 0.0;
    total += out[i];
  }
  if (total < kNormEps) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
  } else {
    for (auto& p : out) p /= total;
  }
}

void current_strategy(const UpdateRule& rule, std::span<const double> regret,
                      std::span<double> out) {
  if (rule.kind == RuleKind::kA7) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return;
  }
  regret_matching(regret, out);
}

double accumulate_regret(const UpdateRule& rule, double cumulative, double instant, int t) {
  if (t < 1) throw ContractViolation("accumulate_regret requires t >= 1");
  switch (rule.kind) {
    case RuleKind::kA1:
      return std::max(cumulative + instant, 0.0);
    case RuleKind::kA2:
      return cumulative + static_cast<double>(t) * instant;
    case RuleKind::kA3: {
      const double ta = std::pow(static_cast<double>(t), cumulative > 0 ? rule.alpha : rule.beta);
      return cumulative * (ta / (ta + 1.0)) + instant;
    }
    case RuleKind::kA4:
      return cumulative + std::exp(rule.alpha) * instant;
    case RuleKind::kA6:
      return cumulative + std::max(instant, 0.0);
    case RuleKind::kA5:
    case RuleKind::kA7:
      return cumulative + instant;
  }
  return cumulative;
}

void update_average(std::span<double> strategy_sum, std::span<const double> sigma,
                    double reach, double w) {
  for (size_t i = 0; i < strategy_sum.size(); ++i) strategy_sum[i] += w * reach * sigma[i];
}

std::span<const double> StrategyProfile::at(int infoset) const {
  const auto& e = tree->infosets()[infoset];
  return std::span<const double>(probs).subspan(e.offset, e.actions.size());
}

std::span<double> StrategyProfile::at(int infoset) {
  const auto& e = tree->infosets()[infoset];
  return std::span<double>(probs).subspan(e.offset, e.actions.size());
}

StrategyProfile StrategyProfile::uniform(const games::CompiledTree& tree) {
  StrategyProfile p;
  p.tree = &tree;
  p.probs.resize(tree.total_actions());
  for (const auto& e : tree.infosets()) {
    const double u = 1.0 / static_cast<double>(e.actions.size());
    for (size_t a = 0; a < e.actions.size(); ++a) p.probs[e.offset + a] = u;
  }
  return p;
}

Solver::Solver(const games::CompiledTree& tree, Options opts)
    : tree_(&tree),
      opts_(opts),
      regret_(tree.total_actions(), 0.0),
      strat_sum_(tree.total_actions(), 0.0),
      instant_(tree.total_actions(), 0.0),
      reach_weight_(tree.num_infosets(), 0.0) {}

void Solver::iteration(const UpdateRule& rule) {
  const int t = t_ + 1;
  const double w = opts_.linear_avg_weight ? static_cast<double>(t) : 1.0;
  std::fill(instant_.begin(), instant_.end(), 0.0);
  std::fill(reach_weight_.begin(), reach_weight_.end(), 0.0);
  if (opts_.alternating) {
    for (int p = 0; p < games::kNumPlayers; ++p) {
      walk(0, p, 1.0, 1.0, rule, w);
      apply_accumulation(p, rule, t);
    }
  } else {
    for (int p = 0; p < games::kNumPlayers; ++p) walk(0, p, 1.0, 1.0, rule, w);
    for (int p = 0; p < games::kNumPlayers; ++p) apply_accumulation(p, rule, t);
  }
  t_ = t;
}

double Solver::walk(int node, int player, double reach_me, double reach_other,
                    const UpdateRule& rule, double w) {
  const games::TreeNode& n = tree_->nodes()[node];
  switch (n.kind) {
    case games::NodeKind::kTerminal:
      return player == 0 ? n.util_p0 : -n.util_p0;
    case games::NodeKind::kChance: {
      double v = 0;
      for (int k = 0; k < n.num_children; ++k)
        v += n.chance_prob *
             walk(tree_->child(node, k), player, reach_me, reach_other * n.chance_prob, rule, w);
      return v;
    }
    case games::NodeKind::kDecision:
      break;
  }
  const auto& e = tree_->infosets()[n.infoset];
  const int na = n.num_children;
  std::array<double, kMaxActions> sigma;
  current_strategy(rule, std::span<const double>(regret_).subspan(e.offset, na),
                   std::span<double>(sigma.data(), na));
  if (n.player == player) {
    std::array<double, kMaxActions> v;
    double ev = 0;
    for (int a = 0; a < na; ++a) {
      v[a] = walk(tree_->child(node, a), player, reach_me * sigma[a], reach_other, rule, w);
      ev += sigma[a] * v[a];
    }
    for (int a = 0; a < na; ++a) instant_[e.offset + a] += reach_other * (v[a] - ev);
    reach_weight_[n.infoset] += reach_other;
    update_average(std::span<double>(strat_sum_).subspan(e.offset, na),
                   std::span<const double>(sigma.data(), na), reach_me, w);
    return ev;
  }
  double ev = 0;
  for (int a = 0; a < na; ++a)
    ev += sigma[a] *
          walk(tree_->child(node, a), player, reach_me, reach_other * sigma[a], rule, w);
  return ev;
}

void Solver::apply_accumulation(int player, const UpdateRule& rule, int t) {
  for (const auto& e : tree_->infosets()) {
    if (e.player != player) continue;
    for (size_t a = 0; a < e.actions.size(); ++a) {
      const int i = e.offset + static_cast<int>(a);
      regret_[i] = accumulate_regret(rule, regret_[i], instant_[i], t);
    }
  }
}

std::vector<double> Solver::strategy_now(int infoset, const UpdateRule& rule) const {
  if (infoset < 0 || infoset >= tree_->num_infosets())
    throw LookupError("infoset index out of range");
  const auto& e = tree_->infosets()[infoset];
  std::vector<double> out(e.actions.size());
  current_strategy(rule, std::span<const double>(regret_).subspan(e.offset, out.size()), out);
  return out;
}

StrategyProfile Solver::average_profile() const {
  StrategyProfile p;
  p.tree = tree_;
  p.probs.resize(tree_->total_actions());
  for (const auto& e : tree_->infosets()) {
    double total = 0;
    for (size_t a = 0; a < e.actions.size(); ++a) total += strat_sum_[e.offset + a];
    if (total < kNormEps) {
      const double u = 1.0 / static_cast<double>(e.actions.size());
      for (size_t a = 0; a < e.actions.size(); ++a) p.probs[e.offset + a] = u;
    } else {
      for (size_t a = 0; a < e.actions.size(); ++a)
        p.probs[e.offset + a] = strat_sum_[e.offset + a] / total;
    }
  }
  return p;
}

StrategyProfile Solver::current_profile(const UpdateRule& rule) const {
  StrategyProfile p;
  p.tree = tree_;
  p.probs.resize(tree_->total_actions());
  for (int i = 0; i < tree_->num_infosets(); ++i) {
    auto s = strategy_now(i, rule);
    std::copy(s.begin(), s.end(), p.at(i).begin());
  }
  return p;
}

}  // namespace cfrlab::cfr
