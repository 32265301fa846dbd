#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfrlab/errors.hpp"

namespace cfrlab::games {

inline constexpr int kNumPlayers = 2;

enum class Action : int8_t { kFold = 0, kCall = 1, kRaise = 2 };

inline char action_char(Action a) {
  switch (a) {
    case Action::kFold: return 'f';
    case Action::kCall: return 'c';
    case Action::kRaise: return 'r';
  }
  return '?';
}

// Rules of a limit poker variant: deck, rounds, antes, bet sizes.
struct GameSpec {
  std::string name;
  int deck_size = 0;
  int ranks = 0;  // distinct card ranks; suits = deck_size / ranks
  int rounds = 0;
  int private_cards = 1;  // per player
  std::vector<int> public_cards_per_round;
  int ante = 1;
  std::vector<int> bet_size_per_round;
  int max_raises_per_round = 2;

  int suits() const { return deck_size / ranks; }
  // Cards on the table once betting round `round` is in progress.
  int cards_dealt_through(int round) const;
  void validate() const;  // throws ConfigError
};

GameSpec kuhn_spec();
GameSpec leduc_spec();
GameSpec royal_spec();
GameSpec spec_by_name(const std::string& name);  // throws UsageError

// A full game history. Value type; Game methods produce successors.
struct State {
  std::vector<int8_t> cards;  // p0 private, p1 private, then publics in order
  std::string betting;        // 'f'/'c'/'r' chars, '/' between rounds
  int round = 0;
  int to_act = 0;
  std::array<int, 2> contrib{0, 0};        // total chips committed
  std::array<int, 2> round_contrib{0, 0};  // chips committed this round
  int raises_this_round = 0;
  int actions_this_round = 0;
  int folded = -1;  // player who folded, or -1
  bool terminal = false;
};

struct InfoSet {
  std::string key;
  std::vector<Action> actions;
};

// Implicit game tree over a validated spec. Immutable after construction;
// safe to share across threads.
class Game {
 public:
  explicit Game(GameSpec spec);

  const GameSpec& spec() const { return spec_; }
  State root() const;
  bool is_terminal(const State& s) const { return s.terminal; }
  bool is_chance(const State& s) const;
  // (card, probability) pairs, ascending by card; uniform over undealt cards.
  std::vector<std::pair<int, double>> chance_outcomes(const State& s) const;
  State apply_chance(const State& s, int card) const;
  std::vector<Action> legal_actions(const State& s) const;
  State apply_action(const State& s, Action a) const;
  // Net chips for `player` at a terminal state. Throws ContractViolation on
  // non-terminal input.
  double utility(const State& s, int player) const;
  int card_rank(int card) const { return card / spec_.suits(); }
  // Key for the acting player's information set. Never encodes the
  // opponent's private card.
  std::string infoset_key(const State& s) const;
  // Complete, duplicate-free, sorted lexicographically by key.
  std::vector<InfoSet> enumerate_infosets(int player) const;

 private:
  GameSpec spec_;
};

}  // namespace cfrlab::games
