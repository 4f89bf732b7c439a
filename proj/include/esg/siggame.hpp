#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "esg/freelogic.hpp"
#include "esg/games.hpp"
#include "esg/relstruct.hpp"

namespace esg {

using StructPtr = std::shared_ptr<const Structure>;

// Move labelling: a variable (with its sort) or a constant.
struct SigLabel {
  bool is_var = false;
  std::string name;
  std::string sort;  // variables only
  bool operator==(const SigLabel& o) const {
    return is_var == o.is_var && name == o.name && sort == o.sort;
  }
};

// A signature game: race-free esp, labelling, value signature, winning
// condition in the free logic.
struct SigGame {
  EspPtr esp;
  std::vector<SigLabel> vc;
  Signature sigma;
  Formula winning;

  size_t size() const { return esp->size(); }
  bool is_var(int e) const { return vc[e].is_var; }
};

using SigGamePtr = std::shared_ptr<const SigGame>;

SigGamePtr make_siggame(EspPtr esp, std::vector<SigLabel> vc, Signature sigma,
                        Formula winning);

// Rename variables, constants, relations and sorts with a prefix (the
// left/right tagging of parallel composition).
Formula rename_formula(const Formula& f, const std::string& prefix);

SigGamePtr dual_siggame(const SigGamePtr& g);

struct ParallelSigGame {
  SigGamePtr game;
  ParallelEsp par;
};
ParallelSigGame parallel_siggame(const SigGamePtr& a, const SigGamePtr& b);
// G⊥ ∥ H with winning W_G -> W_H.
ParallelSigGame hom_siggame(const SigGamePtr& g, const SigGamePtr& h);

// An instantiation (sigma, rho) of G in A.
struct Instantiation {
  EspPtr S;
  SigGamePtr G;
  std::vector<int> sigma;  // total S -> G
  std::vector<Elem> rho;   // per S-event; empty id when not valued
  StructPtr A;

  Strategy strategy() const { return Strategy{S, G->esp, sigma}; }
  EvalInstance eval() const;
  bool wins(const IntSet& x) const;  // x |= W_G
};

void validate_instantiation(const Instantiation& inst);

// last_S(x) through the labelling of sigma.
IntSet last_moves(const Instantiation& inst, const IntSet& x);

// Expansion of (G, A) w.r.t. a subset of the variable moves (V0 given as a
// per-event flag). Events are pairs (g, valuation of expanded moves below g).
struct Expansion {
  SigGamePtr G;
  StructPtr A;
  EspPtr esp;
  std::vector<int> eps;                     // event -> G event
  std::vector<std::map<int, Elem>> gamma;   // valuation on expanded [g]-moves
  std::vector<char> expanded;               // per G event

  Elem value(int e) const;  // gamma[e][eps[e]] for expanded moves, else empty
  EvalInstance eval() const;
  bool wins(const IntSet& x) const;
  int find_event(int g, const std::map<int, Elem>& val) const;  // -1 if absent
};

std::vector<char> all_var_moves(const SigGame& g);
std::vector<char> opponent_var_moves(const SigGame& g);

Expansion expand(SigGamePtr G, StructPtr A, const std::vector<char>& expand_set,
                 size_t cap_events = 5000);

// The unique map of instantiations into the universal one; entry per S-event.
std::vector<int> universal_map(const Instantiation& inst, const Expansion& expn);

struct InstReport {
  StrategyReport via_expansion;  // checker (a): concurrent strategy in expn(G,A)
  bool explicit_receptive = false;  // checker (b): explicit characterisation
  bool explicit_innocent = false;
  bool checkers_agree = false;
  bool deterministic = false;
  bool rigid = false;
  bool open = false;
  bool winning = false;
  std::string witness;
  bool is_strategy() const { return via_expansion.is_strategy(); }
};

InstReport check_strategy_over_structure(const Instantiation& inst, size_t cap = 24);

// A strategy over structures between signature games: an instantiation of
// the hom game G⊥∥H in A+B.
struct RedStrategy {
  SigGamePtr G, H;
  StructPtr A, B;
  ParallelSigGame hom;  // G⊥∥H over A+B
  Instantiation inst;   // inst.G == hom.game, inst.A == sum(A,B)
};

RedStrategy make_red(SigGamePtr G, StructPtr A, SigGamePtr H, StructPtr B, EspPtr S,
                     std::vector<int> sigma, std::vector<Elem> rho);

// The copycat strategy of (G, A): instantiation corresponding to the copycat
// of the full expansion.
RedStrategy red_copycat(const SigGamePtr& G, const StructPtr& A);

bool red_winning(const RedStrategy& s);

RedStrategy compose_red(const RedStrategy& s1, const RedStrategy& s2,
                        size_t state_cap = 2000000);

// 2-cell iso between Red strategies: strategy iso that also preserves rho.
std::optional<std::vector<int>> find_red_iso(const RedStrategy& a, const RedStrategy& b);

}  // namespace esg
