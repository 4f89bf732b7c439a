#pragma once

#include <memory>
#include <string>
#include <vector>

#include "esg/sdcat.hpp"

namespace esg {

// The two-edge multigraph homomorphism game (four events, two-sorted
// signature, played over A+B).
SigGamePtr multigraph_game();
// Signature of one multigraph (red/green edges on one sort).
Signature multigraph_signature();
StructPtr make_multigraph(std::vector<std::string> verts, std::vector<Tuple> red,
                          std::vector<Tuple> green);

// The revisited one-sided form: three conflicting challenge constants in
// parallel with two Player variables, with delta = cc_G.
DeltaPtr multigraph_cc_game();

// k-pebble game at depth n over a one-sorted relational signature.
DeltaPtr kpebble_game(int k, int n, const Signature& sigma);

// Labelled transition systems as structures: sort "st", unary Start, one
// binary relation per action name.
Signature lts_signature(const std::vector<std::string>& actions);
StructPtr make_lts(const std::vector<std::string>& states, const std::string& start,
                   const std::vector<std::pair<std::string, Tuple>>& transitions);
void check_lts(const Structure& a);  // start states have no incoming transitions

DeltaPtr simulation_game(int n, const std::vector<std::string>& actions);
DeltaPtr trace_inclusion_game(int n, const std::vector<std::string>& actions);

// Ehrenfeucht-Fraisse game, depth-n approximant; two-sided.
DeltaPtr ef_game(int n, const Signature& sigma);

// Winning-strategy existence for SD games via the characterisation by
// valuations of Player moves, searched as a constraint problem over
// +-maximal configurations. Returns the valuations when found.
struct SDSearchResult {
  bool found = false;
  std::vector<Elem> k, h;  // per D(A,B) expansion event
};
SDSearchResult find_winning_sd(const DeltaPtr& d, const StructPtr& A, const StructPtr& B,
                               size_t cap = 20000);

// Classical oracles.
bool oracle_khom_exists(const Structure& A, const Structure& B, int k, int rounds);
bool oracle_simulated(const Structure& A, const std::string& a, const Structure& B,
                      const std::string& b, int transition_rounds);
bool oracle_traces_included(const Structure& A, const std::string& a, const Structure& B,
                            const std::string& b, int max_len,
                            const std::vector<std::string>& actions);
bool oracle_ef_equivalent(const Structure& A, const Structure& B, int rounds);

}  // namespace esg
