#pragma once

#include <span>
#include <vector>

#include "cfrlab/cfr.hpp"

namespace cfrlab::metrics {

struct ExploitabilityReport {
  double br_value_p1 = 0;  // best-response value of player 0 vs player 1
  double br_value_p2 = 0;
  double exploitability = 0;  // (br1 + br2) / 2
  int iteration = 0;
};

// Exact best response by backward induction over the compiled tree. Holds
// scratch buffers so per-iteration evaluation does not reallocate.
class BestResponder {
 public:
  explicit BestResponder(const games::CompiledTree& tree);

  // Max over the player's pure strategies of expected utility against the
  // opponent's profile. Deterministic.
  double best_response_value(const cfr::StrategyProfile& profile, int player);

 private:
  double eval(int node, int player);

  const games::CompiledTree* tree_;
  std::vector<double> reach_;    // opponent-and-chance reach per node
  std::vector<double> value_;    // memoized reach-weighted values
  std::vector<int> value_epoch_;
  std::vector<int> chosen_;      // decided action per own infoset
  std::vector<int> infosets_by_depth_;  // player-agnostic, depth descending
  int epoch_ = 0;
};

ExploitabilityReport exploitability(const games::CompiledTree& tree,
                                    const cfr::StrategyProfile& profile,
                                    int iteration = 0);

// 2 * delta * num_infosets * sqrt(num_actions) / sqrt(T).
double theorem1_bound(long iterations, double delta, int num_infosets, int num_actions);

// Per-player payoff range (max minus min terminal utility), maximized over
// the two players; the delta used for bound checks.
double payoff_range(const games::CompiledTree& tree);

}  // namespace cfrlab::metrics
