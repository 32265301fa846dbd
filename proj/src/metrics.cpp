#include "cfrlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cfrlab::metrics {

using games::CompiledTree;
using games::NodeKind;
using games::TreeNode;

BestResponder::BestResponder(const CompiledTree& tree)
    : tree_(&tree),
      reach_(tree.nodes().size(), 0.0),
      value_(tree.nodes().size(), 0.0),
      value_epoch_(tree.nodes().size(), -1),
      chosen_(tree.num_infosets(), -1),
      infosets_by_depth_(tree.num_infosets()) {
  std::iota(infosets_by_depth_.begin(), infosets_by_depth_.end(), 0);
  std::stable_sort(infosets_by_depth_.begin(), infosets_by_depth_.end(),
                   [&](int a, int b) {
                     return tree.infosets()[a].depth > tree.infosets()[b].depth;
                   });
}

double BestResponder::best_response_value(const cfr::StrategyProfile& profile, int player) {
  const auto& nodes = tree_->nodes();
  // Top-down: opponent-and-chance reach with the responder's reach held at 1.
  // Pre-order guarantees parents come first.
  reach_[0] = 1.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.kind == NodeKind::kTerminal) continue;
    if (n.kind == NodeKind::kChance) {
      for (int k = 0; k < n.num_children; ++k)
        reach_[tree_->child(static_cast<int>(i), k)] = reach_[i] * n.chance_prob;
    } else if (n.player == player) {
      for (int k = 0; k < n.num_children; ++k)
        reach_[tree_->child(static_cast<int>(i), k)] = reach_[i];
    } else {
      auto sigma = profile.at(n.infoset);
      for (int k = 0; k < n.num_children; ++k)
        reach_[tree_->child(static_cast<int>(i), k)] = reach_[i] * sigma[k];
    }
  }
  // Bottom-up by infoset depth: deeper own decisions are fixed before the
  // argmax at shallower ones, so memoized subtree values stay valid.
  ++epoch_;
  for (int id : infosets_by_depth_) {
    const auto& e = tree_->infosets()[id];
    if (e.player != player) continue;
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < e.actions.size(); ++a) {
      double v = 0;
      for (int node : e.nodes) v += eval(tree_->child(node, static_cast<int>(a)), player);
      if (v > best_value) {
        best_value = v;
        best = static_cast<int>(a);
      }
    }
    chosen_[id] = best;
  }
  return eval(0, player);
}

double BestResponder::eval(int node, int player) {
  if (value_epoch_[node] == epoch_) return value_[node];
  const TreeNode& n = tree_->nodes()[node];
  double v = 0;
  switch (n.kind) {
    case NodeKind::kTerminal:
      v = reach_[node] * (player == 0 ? n.util_p0 : -n.util_p0);
      break;
    case NodeKind::kDecision:
      if (n.player == player) {
        v = eval(tree_->child(node, chosen_[n.infoset]), player);
        break;
      }
      [[fallthrough]];
    case NodeKind::kChance:
      for (int k = 0; k < n.num_children; ++k) v += eval(tree_->child(node, k), player);
      break;
  }
  value_[node] = v;
  value_epoch_[node] = epoch_;
  return v;
}

ExploitabilityReport exploitability(const CompiledTree& tree,
                                    const cfr::StrategyProfile& profile, int iteration) {
  BestResponder br(tree);
  ExploitabilityReport r;
  r.br_value_p1 = br.best_response_value(profile, 0);
  r.br_value_p2 = br.best_response_value(profile, 1);
  r.exploitability = (r.br_value_p1 + r.br_value_p2) / 2.0;
  r.iteration = iteration;
  return r;
}

double theorem1_bound(long iterations, double delta, int num_infosets, int num_actions) {
  if (iterations < 1) throw ContractViolation("theorem1_bound requires T >= 1");
  if (delta <= 0 || num_infosets <= 0 || num_actions <= 0)
    throw ContractViolation("theorem1_bound requires positive inputs");
  return 2.0 * delta * num_infosets * std::sqrt(static_cast<double>(num_actions)) /
         std::sqrt(static_cast<double>(iterations));
}

double payoff_range(const CompiledTree& tree) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& n : tree.nodes()) {
    if (n.kind != NodeKind::kTerminal) continue;
    lo = std::min({lo, n.util_p0, -n.util_p0});
    hi = std::max({hi, n.util_p0, -n.util_p0});
  }
  return hi - lo;
}

}  // namespace cfrlab::metrics
