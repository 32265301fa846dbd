#include "cfrlab/tree.hpp"

namespace cfrlab::games {

CompiledTree::CompiledTree(const Game& game) : game_(&game) {
  for (int p = 0; p < kNumPlayers; ++p) {
    for (auto& is : game.enumerate_infosets(p)) {
      InfosetEntry e;
      e.key = is.key;
      e.player = p;
      e.depth = static_cast<int>(is.key.size() - is.key.rfind(':') - 1);
      e.actions = is.actions;
      e.offset = total_actions_;
      total_actions_ += static_cast<int>(is.actions.size());
      infoset_index_.emplace(e.key, static_cast<int>(infosets_.size()));
      infosets_.push_back(std::move(e));
    }
  }
  build(game.root());
}

int CompiledTree::infoset_id(const std::string& key) const {
  auto it = infoset_index_.find(key);
  if (it == infoset_index_.end()) throw LookupError("unknown infoset key '" + key + "'");
  return it->second;
}

int CompiledTree::build(const State& s) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  std::vector<int> kids;
  if (game_->is_terminal(s)) {
    nodes_[id].kind = NodeKind::kTerminal;
    nodes_[id].util_p0 = game_->utility(s, 0);
  } else if (game_->is_chance(s)) {
    auto outcomes = game_->chance_outcomes(s);
    nodes_[id].kind = NodeKind::kChance;
    nodes_[id].chance_prob = outcomes.front().second;
    kids.reserve(outcomes.size());
    for (auto [card, prob] : outcomes) kids.push_back(build(game_->apply_chance(s, card)));
  } else {
    const int infoset = infoset_index_.at(game_->infoset_key(s));
    nodes_[id].kind = NodeKind::kDecision;
    nodes_[id].player = static_cast<int8_t>(s.to_act);
    nodes_[id].infoset = infoset;
    infosets_[infoset].nodes.push_back(id);
    for (Action a : game_->legal_actions(s)) kids.push_back(build(game_->apply_action(s, a)));
  }
  nodes_[id].child_start = static_cast<int>(children_.size());
  nodes_[id].num_children = static_cast<int>(kids.size());
  children_.insert(children_.end(), kids.begin(), kids.end());
  return id;
}

}  // namespace cfrlab::games
