#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "esg/eventstruct.hpp"

namespace esg {

enum class Pol : int { Neg = -1, Neu = 0, Pos = 1 };

inline Pol flip(Pol p) { return static_cast<Pol>(-static_cast<int>(p)); }

// Event structure with polarity. A game is an esp without neutral events;
// race-freeness is checked where operations require it.
struct Esp {
  EventStructure es;
  std::vector<Pol> pol;

  size_t size() const { return es.size(); }
  bool positive(int e) const { return pol[e] == Pol::Pos; }
  bool negative(int e) const { return pol[e] == Pol::Neg; }
};

using EspPtr = std::shared_ptr<const Esp>;

// Aliasing view of the underlying event structure, sharing ownership.
inline EsPtr es_of(const EspPtr& p) { return EsPtr(p, &p->es); }

EspPtr make_esp(EventStructure es, std::vector<Pol> pol);

bool has_neutral(const Esp& e);
bool race_free(const Esp& e, std::string* witness = nullptr);

EspPtr dual_esp(const EspPtr& a);

// Parallel juxtaposition, events tagged l. / r.
struct ParallelEsp {
  EspPtr esp;
  std::vector<int> component;              // 0 left, 1 right
  std::vector<int> orig;                   // index in the component esp
  std::vector<int> from_left, from_right;  // injections
  IntSet left_part(const IntSet& x) const;   // as a configuration of the left esp
  IntSet right_part(const IntSet& x) const;
};
ParallelEsp parallel_esp(const EspPtr& a, const EspPtr& b);

// A game with a decidable winning predicate on configurations.
using WinPred = std::function<bool(const IntSet&)>;

struct GameW {
  EspPtr esp;
  WinPred win;
};

GameW dual(const GameW& g);
struct ParallelGameW {
  GameW game;
  ParallelEsp par;
};
ParallelGameW parallel(const GameW& a, const GameW& b);

// The hom-game A⊥ ∥ B together with its decomposition data.
struct HomGame {
  EspPtr left;   // A, not dualized
  EspPtr right;  // B
  ParallelEsp par;  // (A⊥) ∥ B
  const EspPtr& esp() const { return par.esp; }
};
HomGame hom_game(const EspPtr& a, const EspPtr& b);

// A (candidate) strategy: total map of esps sigma : S -> game.
struct Strategy {
  EspPtr inner;
  EspPtr game;
  std::vector<int> map;

  ESMap es_map() const;
  IntSet image(const IntSet& x) const;
};

struct StrategyReport {
  bool valid_map = false;
  bool receptive = false;
  bool innocent = false;
  bool deterministic = false;
  std::string witness;
  bool is_strategy() const { return valid_map && receptive && innocent; }
};

StrategyReport check_strategy(const Strategy& s, size_t cap = 24);

// Copycat strategy on A⊥∥A; companion(e) swaps components.
struct Copycat {
  Strategy strat;  // inner CC_A -> A⊥∥A (identity on events)
  HomGame game;    // A⊥∥A
  std::vector<int> companion;  // on game/inner indices
};
Copycat copycat(const EspPtr& a);

// Interaction and composition of sigma : S -> A⊥∥B with tau : T -> B⊥∥C.
struct ComposeResult {
  Strategy strat;        // T ⊙ S -> A⊥∥C
  EspPtr interaction;    // T ⊛ S, neutral events over B
  std::vector<int> inter_s, inter_t;  // top atom per interaction event (-1 if none)
  std::vector<int> inter_hidden;      // interaction event -> strat event or -1
  Pullback pb;                        // underlying pullback (family for tests)
  ParallelEsp leg_sc, leg_at;         // the legs S∥C and A∥T of the pullback
};

ComposeResult compose_strategies(const Strategy& sigma, const HomGame& gab,
                                 const Strategy& tau, const HomGame& gbc,
                                 const HomGame& gac, const SyncFilter& value_ok = nullptr,
                                 size_t state_cap = 2000000);

// +-maximal configurations of the inner esp of a strategy.
bool plus_maximal(const Esp& s, const IntSet& x);
std::vector<IntSet> plus_maximal_configs(const Esp& s);

bool check_winning(const Strategy& s, const WinPred& win);

// Cross-validation: play sigma against every deterministic counter-strategy
// drawn from the dual game's own event set, and require every maximal result
// to be winning.
bool verify_winning_via_counterstrategies(const Strategy& s, const WinPred& win,
                                          size_t state_cap = 2000000);

// Deterministic strategies whose inner esp is carved from the game itself:
// a subset of Player events (all Opponent events kept) plus extra
// Opponent-before-Player dependencies.
std::vector<Strategy> enumerate_carved_strategies(const EspPtr& game,
                                                  bool deterministic_only = true,
                                                  size_t limit = 100000);

// 2-cell iso search between strategies on the same game: a bijection
// f : S -> S' with sigma' f = sigma preserving order and conflict.
std::optional<std::vector<int>> find_strategy_iso(const Strategy& a, const Strategy& b);

// Scott order on configurations of an esp (games: no neutral events).
bool scott_leq(const Esp& game, const IntSet& y, const IntSet& x);
bool scott_leq_witness(const Esp& game, const IntSet& y, const IntSet& x, IntSet* z);

}  // namespace esg
