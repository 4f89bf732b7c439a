#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "esg/games.hpp"
#include "esg/relstruct.hpp"

namespace esg {

// Terms: variables, constants, or elements of the value structure.
struct Term {
  enum class Kind { Var, Const, Elem };
  Kind kind;
  std::string name;  // var or const name
  Elem elem;         // Kind::Elem

  static Term var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static Term cst(std::string n) { return {Kind::Const, std::move(n), {}}; }
  static Term of_elem(Elem e) { return {Kind::Elem, "", std::move(e)}; }
};

struct Assertion;
using Formula = std::shared_ptr<const Assertion>;

// Free-logic assertions. `Implies` is kept primitive (it evaluates as
// not-lhs or rhs). `EqRel` is equality read as the signature relation of the
// value structure; `Eq` is identity of denoted values.
struct Assertion {
  enum class Kind {
    Rel,
    Eq,
    EqRel,
    EPred,
    Prec,
    EqPrec,
    And,
    Or,
    Not,
    Implies,
    Exists,
    Forall
  };
  Kind kind;
  std::string rel;
  std::vector<Term> terms;
  std::vector<Formula> kids;
  std::string qvar, qsort;
};

Formula f_rel(std::string rel, std::vector<Term> ts);
Formula f_eq(Term a, Term b);
Formula f_eqrel(Term a, Term b);
Formula f_epred(Term t);
Formula f_prec(Term a, Term b);
Formula f_eqprec(Term a, Term b);
Formula f_and(std::vector<Formula> fs);
Formula f_or(std::vector<Formula> fs);
Formula f_not(Formula f);
Formula f_implies(Formula a, Formula b);
Formula f_exists(std::string var, std::string sort, Formula f);
Formula f_forall(std::string var, std::string sort, Formula f);
Formula f_true();
Formula f_false();

uint64_t formula_size(const Formula& f);

// Evaluation context: an instantiation (sigma, rho) of a labelled game in a
// structure, restricted to what the semantics needs. Events are those of the
// inner esp S; labels and order comparisons are taken through sigma.
struct EvalInstance {
  const EventStructure* inner = nullptr;
  const std::vector<Pol>* pol = nullptr;
  struct Label {
    bool is_var = false;
    std::string name;
    std::string sort;  // for variables
  };
  std::vector<Label> label;        // per inner event
  std::vector<int> sigma;          // inner event -> game event
  const BitMat* game_leq = nullptr;  // order of the game
  std::vector<Elem> rho;           // value per inner event; empty id if none
  const Structure* value = nullptr;  // the value structure (A)

  bool game_le(int s1, int s2) const { return game_leq->get(sigma[s1], sigma[s2]); }
  bool game_lt(int s1, int s2) const {
    return sigma[s1] != sigma[s2] && game_le(s1, s2);
  }
};

// Events of x that are latest for their label.
IntSet last_events(const EvalInstance& inst, const IntSet& x);

bool satisfies(const IntSet& x, const Formula& f, const EvalInstance& inst);

// Printing and parsing (prefix format). The resolver decides whether a bare
// token is a variable or a constant; element terms are written @sort:id.
std::string print_formula(const Formula& f);
using TermResolver = std::function<std::optional<Term>(const std::string&)>;
Formula parse_formula(const std::string& text, const TermResolver& resolve);

}  // namespace esg
