#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cfrlab/games.hpp"

namespace cfrlab::games {

enum class NodeKind : int8_t { kChance, kDecision, kTerminal };

struct TreeNode {
  NodeKind kind;
  int8_t player = -1;      // decision nodes
  int infoset = -1;        // decision nodes
  int child_start = 0;
  int num_children = 0;
  double chance_prob = 0;  // per-child probability (uniform) at chance nodes
  double util_p0 = 0;      // terminal nodes; player 1 gets the negation
};

struct InfosetEntry {
  std::string key;
  int player = 0;
  int depth = 0;  // betting-sequence length; strictly increases downward
  std::vector<Action> actions;
  std::vector<int> nodes;  // member decision nodes, pre-order
  int offset = 0;          // into flattened per-(infoset, action) tables
};

// Fully expanded game tree (chance included) in pre-order, with information
// sets registered in enumerate_infosets order (player 0 first, each player's
// keys sorted). Built once per game; read-only afterwards.
class CompiledTree {
 public:
  explicit CompiledTree(const Game& game);

  const Game& game() const { return *game_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<InfosetEntry>& infosets() const { return infosets_; }
  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  int total_actions() const { return total_actions_; }
  int infoset_id(const std::string& key) const;  // throws LookupError
  int child(int node, int k) const { return children_[nodes_[node].child_start + k]; }

 private:
  int build(const State& s);

  const Game* game_;
  std::vector<TreeNode> nodes_;
  std::vector<int> children_;
  std::vector<InfosetEntry> infosets_;
  std::unordered_map<std::string, int> infoset_index_;
  int total_actions_ = 0;
};

}  // namespace cfrlab::games
