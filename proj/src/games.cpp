#include "cfrlab/games.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace cfrlab::games {

int GameSpec::cards_dealt_through(int round) const {
  int n = kNumPlayers * private_cards;
  for (int r = 0; r <= round && r < rounds; ++r) n += public_cards_per_round[r];
  return n;
}

void GameSpec::validate() const {
  if (deck_size < 2 || ranks < 1 || deck_size % ranks != 0)
    throw ConfigError("spec '" + name + "': deck_size must be a positive multiple of ranks");
  if (rounds < 1) throw ConfigError("spec '" + name + "': rounds must be >= 1");
  if (private_cards != 1)
    throw ConfigError("spec '" + name + "': exactly one private card per player is supported");
  if (static_cast<int>(public_cards_per_round.size()) != rounds)
    throw ConfigError("spec '" + name + "': public_cards_per_round must have one entry per round");
  if (static_cast<int>(bet_size_per_round.size()) != rounds)
    throw ConfigError("spec '" + name + "': bet_size_per_round must have one entry per round");
  for (int b : bet_size_per_round)
    if (b <= 0) throw ConfigError("spec '" + name + "': bet sizes must be positive");
  int publics = 0;
  for (int c : public_cards_per_round) {
    if (c < 0) throw ConfigError("spec '" + name + "': negative public card count");
    publics += c;
  }
  if (deck_size < kNumPlayers * private_cards + publics)
    throw ConfigError("spec '" + name + "': deck too small for the cards dealt");
  if (ante < 0) throw ConfigError("spec '" + name + "': negative ante");
  if (max_raises_per_round < 1)
    throw ConfigError("spec '" + name + "': max_raises_per_round must be >= 1");
}

GameSpec kuhn_spec() {
  GameSpec s;
  s.name = "kuhn";
  s.deck_size = 3;
  s.ranks = 3;
  s.rounds = 1;
  s.public_cards_per_round = {0};
  s.ante = 1;
  s.bet_size_per_round = {1};
  // Classic Kuhn allows a single bet per round; re-raising would grow the
  // game beyond its 12 information sets.
  s.max_raises_per_round = 1;
  return s;
}

GameSpec leduc_spec() {
  GameSpec s;
  s.name = "leduc";
  s.deck_size = 6;
  s.ranks = 3;
  s.rounds = 2;
  s.public_cards_per_round = {0, 1};
  s.ante = 1;
  s.bet_size_per_round = {2, 4};
  s.max_raises_per_round = 2;
  return s;
}

GameSpec royal_spec() {
  GameSpec s;
  s.name = "royal";
  s.deck_size = 8;
  s.ranks = 4;
  s.rounds = 3;
  s.public_cards_per_round = {0, 1, 1};
  s.ante = 1;
  s.bet_size_per_round = {2, 4, 4};
  s.max_raises_per_round = 2;
  return s;
}

GameSpec spec_by_name(const std::string& name) {
  if (name == "kuhn") return kuhn_spec();
  if (name == "leduc") return leduc_spec();
  if (name == "royal") return royal_spec();
  throw UsageError("unknown game '" + name + "' (valid: kuhn, leduc, royal)");
}

Game::Game(GameSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

State Game::root() const {
  State s;
  s.contrib = {spec_.ante, spec_.ante};
  return s;
}

bool Game::is_chance(const State& s) const {
  return !s.terminal &&
         static_cast<int>(s.cards.size()) < spec_.cards_dealt_through(s.round);
}

std::vector<std::pair<int, double>> Game::chance_outcomes(const State& s) const {
  if (!is_chance(s)) throw ContractViolation("chance_outcomes on a non-chance node");
  std::vector<bool> used(spec_.deck_size, false);
  for (int8_t c : s.cards) used[c] = true;
  const int remaining = spec_.deck_size - static_cast<int>(s.cards.size());
  std::vector<std::pair<int, double>> out;
  out.reserve(remaining);
  for (int c = 0; c < spec_.deck_size; ++c)
    if (!used[c]) out.emplace_back(c, 1.0 / remaining);
  return out;
}

State Game::apply_chance(const State& s, int card) const {
  if (!is_chance(s)) throw ContractViolation("apply_chance on a non-chance node");
  State n = s;
  n.cards.push_back(static_cast<int8_t>(card));
  return n;
}

std::vector<Action> Game::legal_actions(const State& s) const {
  if (s.terminal || is_chance(s)) return {};
  std::vector<Action> acts;
  const bool facing = s.round_contrib[1 - s.to_act] > s.round_contrib[s.to_act];
  if (facing) acts.push_back(Action::kFold);
  acts.push_back(Action::kCall);
  if (s.raises_this_round < spec_.max_raises_per_round) acts.push_back(Action::kRaise);
  return acts;
}

namespace {

void end_round(const GameSpec& spec, State& s) {
  ++s.round;
  if (s.round == spec.rounds) {
    s.terminal = true;
  } else {
    s.round_contrib = {0, 0};
    s.raises_this_round = 0;
    s.actions_this_round = 0;
    s.to_act = 0;
    s.betting += '/';
  }
}

}  // namespace

State Game::apply_action(const State& s, Action a) const {
  if (s.terminal || is_chance(s)) throw ContractViolation("apply_action on a non-decision node");
  State n = s;
  const int me = n.to_act;
  const int opp = 1 - me;
  switch (a) {
    case Action::kFold: {
      if (n.round_contrib[opp] <= n.round_contrib[me])
        throw ContractViolation("fold with no outstanding bet");
      n.folded = me;
      n.terminal = true;
      n.betting += 'f';
      break;
    }
    case Action::kCall: {
      const bool facing = n.round_contrib[opp] > n.round_contrib[me];
      n.contrib[me] += n.round_contrib[opp] - n.round_contrib[me];
      n.round_contrib[me] = n.round_contrib[opp];
      ++n.actions_this_round;
      n.betting += 'c';
      if (facing || n.actions_this_round >= 2) {
        end_round(spec_, n);
      } else {
        n.to_act = opp;  // a check; the opponent still speaks
      }
      break;
    }
    case Action::kRaise: {
      if (n.raises_this_round >= spec_.max_raises_per_round)
        throw ContractViolation("raise past the per-round cap");
      const int target = n.round_contrib[opp] + spec_.bet_size_per_round[n.round];
      n.contrib[me] += target - n.round_contrib[me];
      n.round_contrib[me] = target;
      ++n.raises_this_round;
      ++n.actions_this_round;
      n.betting += 'r';
      n.to_act = opp;
      break;
    }
  }
  return n;
}

namespace {

// -1 on a split pot. A paired private card beats a high card; two pairs (or
// none) compare by private rank.
int showdown_winner(const Game& g, const State& s) {
  const int r0 = g.card_rank(s.cards[0]);
  const int r1 = g.card_rank(s.cards[1]);
  bool pair0 = false, pair1 = false;
  for (size_t i = 2; i < s.cards.size(); ++i) {
    const int pr = g.card_rank(s.cards[i]);
    pair0 = pair0 || pr == r0;
    pair1 = pair1 || pr == r1;
  }
  if (pair0 != pair1) return pair0 ? 0 : 1;
  if (r0 == r1) return -1;
  return r0 > r1 ? 0 : 1;
}

}  // namespace

double Game::utility(const State& s, int player) const {
  if (!s.terminal) throw ContractViolation("utility on a non-terminal node");
  const double pot = s.contrib[0] + s.contrib[1];
  int winner;
  if (s.folded >= 0) {
    winner = 1 - s.folded;
  } else {
    winner = showdown_winner(*this, s);
    if (winner < 0) return pot / 2.0 - s.contrib[player];
  }
  return (player == winner ? pot : 0.0) - s.contrib[player];
}

std::string Game::infoset_key(const State& s) const {
  if (s.terminal || is_chance(s)) throw ContractViolation("infoset_key on a non-decision node");
  std::ostringstream os;
  os << s.to_act << ':' << card_rank(s.cards[s.to_act]) << ':';
  for (size_t i = 2; i < s.cards.size(); ++i) os << card_rank(s.cards[i]);
  os << ':' << s.betting;
  return os.str();
}

std::vector<InfoSet> Game::enumerate_infosets(int player) const {
  std::map<std::string, std::vector<Action>> found;
  std::function<void(const State&)> dfs = [&](const State& s) {
    if (s.terminal) return;
    if (is_chance(s)) {
      for (auto [card, prob] : chance_outcomes(s)) dfs(apply_chance(s, card));
      return;
    }
    if (s.to_act == player) found.emplace(infoset_key(s), legal_actions(s));
    for (Action a : legal_actions(s)) dfs(apply_action(s, a));
  };
  dfs(root());
  std::vector<InfoSet> out;
  out.reserve(found.size());
  for (auto& [key, acts] : found) out.push_back({key, std::move(acts)});
  return out;
}

}  // namespace cfrlab::games
