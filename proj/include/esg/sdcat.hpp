#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "esg/siggame.hpp"

namespace esg {

// A deterministic idempotent comonad in the bicategory of signature games:
// a deterministic strategy delta : D -> G⊥∥G whose counit into copycat is
// the same function on events, with an invertible comultiplication.
struct DeltaBundle {
  SigGamePtr G;
  ParallelSigGame hom;      // G⊥∥G with winning W1 -> W2
  EspPtr D;
  std::vector<int> delta;   // D -> hom esp
  int depth = 0;            // grading; part of the bundle's identity

  // D viewed as a signature game (labels inherited through delta).
  SigGamePtr D_sig;
  // CC_G and the counit c : D -> CC_G (same function as delta, indices into
  // the copycat's inner esp).
  Copycat cc;
  std::vector<int> counit;
  // Companion event in D (unique consistent event over the mirrored game
  // move), or -1.
  std::vector<int> companion;
};

using DeltaPtr = std::shared_ptr<const DeltaBundle>;

// delta = cc_G.
DeltaPtr delta_copycat(const SigGamePtr& g, int depth = 0);
// General constructor; D given with its map into G⊥∥G.
DeltaPtr make_delta(const SigGamePtr& g, EspPtr D, std::vector<int> delta, int depth = 0);

// The companion of e1 within the context of an event consistent with it:
// the unique D-event over the mirrored game move consistent with both.
// Returns -1 when absent, -2 when ambiguous.
int delta_companion(const DeltaBundle& d, int e1, int ctx);

struct DeltaReport {
  bool strategy = false;
  bool deterministic = false;
  bool counit_map = false;       // c is a map of esps into CC_G
  bool comult_iso = false;       // some 2-cell iso d : D ≅ D⊙D
  bool counit_law_left = false;  // (c⊙1)∘d is a 2-cell iso onto CC⊙D
  bool counit_law_right = false; // (1⊙c)∘d is a 2-cell iso onto D⊙CC
  bool coassoc = false;          // (d⊙1)∘d and (1⊙d)∘d isos onto associated targets
  bool companions_ok = false;    // companion order property (Lemma companions (ii))
  bool scott_lemma = false;      // dz = y⊙x consequences
  std::string witness;
  bool pass() const {
    return strategy && deterministic && counit_map && comult_iso && counit_law_left &&
           counit_law_right && coassoc && companions_ok && scott_lemma;
  }
};

DeltaReport verify_delta(const DeltaBundle& d, size_t cap = 24,
                         size_t state_cap = 2000000);

// Partial expansion D(A) / D(A,B) w.r.t. Opponent variable moves.
struct PartialExpansion {
  DeltaPtr delta;
  StructPtr A, B;   // B == A for the one-sided form
  bool one_sided = false;
  Expansion expn;   // over sum(A,B)

  std::vector<int> side;        // per event: 0 over G⊥, 1 over G
  std::vector<int> companion;   // per event: companion event or -1
  std::vector<int> carrier;     // V2 variable moves (the Rel carrier, sorted)

  const EspPtr& esp() const { return expn.esp; }
  int pi1(int e) const { return expn.eps[e]; }             // into D
  int to_hom(int e) const { return delta->delta[expn.eps[e]]; }  // into G⊥∥G
  // Valuation of an Opponent-expanded move (rho(A) / rho(B)).
  Elem rho(int e) const { return expn.value(e); }

  // Evaluate the (untagged) winning condition W of G on the restriction of a
  // configuration to one side, with the supplied values for Player moves.
  // `player_values` maps expansion events (Player variable moves of that
  // side) to elements of `value_structure`.
  bool side_wins(const IntSet& x, int which_side, const StructPtr& value_structure,
                 const std::vector<Elem>& player_values) const;
};

PartialExpansion build_partial_expansion(const DeltaPtr& d, const StructPtr& A,
                                         const StructPtr& B, bool one_sided,
                                         size_t cap = 5000);

// Membership: factor a Red strategy (G,A) -> (G,B) openly through delta.
struct SDStrategy {
  DeltaPtr delta;
  RedStrategy red;
  std::vector<int> sigma1;  // inner -> D
  bool open = false;
};

enum class SDMembership { Yes, NoFactorisation, FactorisationNotOpen };
SDMembership sd_membership(const DeltaPtr& d, const RedStrategy& red, SDStrategy* out,
                           std::string* witness = nullptr);

// The identity candidate at B: pullback of delta along the copycat of (G,B).
struct SDIdentity {
  SDStrategy strat;
  bool winning = false;
};
SDIdentity sd_identity(const DeltaPtr& d, const StructPtr& B, size_t cap = 5000);

SDStrategy sd_compose(const SDStrategy& s1, const SDStrategy& s2,
                      size_t state_cap = 2000000);

// Two-sided characterisation: decompose an SD strategy into the functions
// (k, h) on Player variable moves of D(A,B); recompose checks the winning
// implication at every +-maximal configuration.
struct TwoSided {
  PartialExpansion dab;
  std::vector<Elem> k;  // indexed by expansion event; empty when not a V1+ move
  std::vector<Elem> h;  // indexed by expansion event; empty when not a V2+ move
};

TwoSided two_sided_decompose(const SDStrategy& s, size_t cap = 5000);
// Returns the reconstructed strategy; sets *winning, and when false fills
// *witness with a violating +-maximal configuration.
std::optional<SDStrategy> two_sided_recompose(const DeltaPtr& d, const StructPtr& A,
                                              const StructPtr& B,
                                              const PartialExpansion& dab,
                                              const std::vector<Elem>& k,
                                              const std::vector<Elem>& h,
                                              std::string* witness = nullptr);

// G-spans for delta = cc_G.
struct GSpan {
  SigGamePtr G;
  StructPtr A, B;
  EspPtr vertex;             // CC_G(A,B)+
  Expansion expA, expB;      // expn(G,A), expn(G,B)
  std::vector<int> legA, legB;  // vertex -> expansion events
};

GSpan span_of_strategy(const SDStrategy& s, size_t cap = 5000);
bool span_winning(const GSpan& s);
GSpan compose_spans(const GSpan& s1, const GSpan& s2, size_t state_cap = 2000000);
bool spans_isomorphic(const GSpan& a, const GSpan& b);

}  // namespace esg
