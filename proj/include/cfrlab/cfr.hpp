#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfrlab/tree.hpp"

namespace cfrlab::cfr {

inline constexpr int kNumRules = 7;

enum class RuleKind : int { kA1 = 0, kA2, kA3, kA4, kA5, kA6, kA7 };

// One of the seven switchable regret-update rules. a3 discounts cumulative
// regret multiplicatively (alpha on positive, beta on negative entries);
// a4 scales instantaneous regret by e^alpha.
struct UpdateRule {
  RuleKind kind = RuleKind::kA5;
  double alpha = 0;
  double beta = 0;
  double gamma_exp = 0;

  static UpdateRule preset(RuleKind kind);
};

UpdateRule rule_from_name(const std::string& name);  // throws UsageError
std::string rule_name(RuleKind kind);
std::vector<std::string> all_rule_names();

// Positive-part normalization; uniform when no mass (denominator < 1e-300).
void regret_matching(std::span<const double> regret, std::span<double> out);
// Strategy for a rule given cumulative regrets. a1..a6 all reduce to
// positive-part normalization (constant and iteration factors cancel in the
// ratio); a7 is uniform.
void current_strategy(const UpdateRule& rule, std::span<const double> regret,
                      std::span<double> out);
// Rule-specific accumulation of one instantaneous regret into a cumulative
// entry at iteration t >= 1.
double accumulate_regret(const UpdateRule& rule, double cumulative, double instant, int t);
// S += w * reach * sigma, elementwise.
void update_average(std::span<double> strategy_sum, std::span<const double> sigma,
                    double reach, double w);

// Per-infoset action probabilities, flattened by the tree's infoset offsets.
struct StrategyProfile {
  const games::CompiledTree* tree = nullptr;
  std::vector<double> probs;

  std::span<const double> at(int infoset) const;
  std::span<double> at(int infoset);
  static StrategyProfile uniform(const games::CompiledTree& tree);
};

// Full-tree CFR with per-iteration rule selection. Owns the regret and
// average-strategy tables for both players; one solver per solve.
struct SolverOptions {
  bool alternating = true;         // one player per half-iteration
  bool linear_avg_weight = false;  // w_t = t instead of 1
};

class Solver {
 public:
  using Options = SolverOptions;

  explicit Solver(const games::CompiledTree& tree, Options opts = Options());

  // One iteration under `rule`: traverses the tree for each player, derives
  // instantaneous regrets weighted by opponent-and-chance reach, accumulates
  // them per the rule, updates average-strategy weights, then advances t.
  void iteration(const UpdateRule& rule);

  int iterations() const { return t_; }
  const games::CompiledTree& tree() const { return *tree_; }
  std::span<const double> cumulative_regrets() const { return regret_; }
  std::span<const double> strategy_sums() const { return strat_sum_; }
  // Instantaneous regrets and per-infoset counterfactual reach weights from
  // the most recent iteration (both players).
  std::span<const double> last_instant_regrets() const { return instant_; }
  std::span<const double> last_reach_weights() const { return reach_weight_; }

  std::vector<double> strategy_now(int infoset, const UpdateRule& rule) const;
  StrategyProfile average_profile() const;
  StrategyProfile current_profile(const UpdateRule& rule) const;

 private:
  double walk(int node, int player, double reach_me, double reach_other,
              const UpdateRule& rule, double w);
  void apply_accumulation(int player, const UpdateRule& rule, int t);

  const games::CompiledTree* tree_;
  Options opts_;
  int t_ = 0;
  std::vector<double> regret_;
  std::vector<double> strat_sum_;
  std::vector<double> instant_;
  std::vector<double> reach_weight_;
};

}  // namespace cfrlab::cfr
