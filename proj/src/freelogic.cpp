#include "esg/freelogic.hpp"

#include <algorithm>
#include <sstream>

namespace esg {

namespace {

Formula node(Assertion a) { return std::make_shared<Assertion>(std::move(a)); }

}  // namespace

Formula f_rel(std::string rel, std::vector<Term> ts) {
  Assertion a;
  a.kind = Assertion::Kind::Rel;
  a.rel = std::move(rel);
  a.terms = std::move(ts);
  return node(std::move(a));
}
Formula f_eq(Term x, Term y) {
  Assertion a;
  a.kind = Assertion::Kind::Eq;
  a.terms = {std::move(x), std::move(y)};
  return node(std::move(a));
}
Formula f_eqrel(Term x, Term y) {
  Assertion a;
  a.kind = Assertion::Kind::EqRel;
  a.terms = {std::move(x), std::move(y)};
  return node(std::move(a));
}
Formula f_epred(Term t) {
  Assertion a;
  a.kind = Assertion::Kind::EPred;
  a.terms = {std::move(t)};
  return node(std::move(a));
}
Formula f_prec(Term x, Term y) {
  Assertion a;
  a.kind = Assertion::Kind::Prec;
  a.terms = {std::move(x), std::move(y)};
  return node(std::move(a));
}
Formula f_eqprec(Term x, Term y) {
  Assertion a;
  a.kind = Assertion::Kind::EqPrec;
  a.terms = {std::move(x), std::move(y)};
  return node(std::move(a));
}
Formula f_and(std::vector<Formula> fs) {
  Assertion a;
  a.kind = Assertion::Kind::And;
  a.kids = std::move(fs);
  return node(std::move(a));
}
Formula f_or(std::vector<Formula> fs) {
  Assertion a;
  a.kind = Assertion::Kind::Or;
  a.kids = std::move(fs);
  return node(std::move(a));
}
Formula f_not(Formula f) {
  Assertion a;
  a.kind = Assertion::Kind::Not;
  a.kids = {std::move(f)};
  return node(std::move(a));
}
Formula f_implies(Formula x, Formula y) {
  Assertion a;
  a.kind = Assertion::Kind::Implies;
  a.kids = {std::move(x), std::move(y)};
  return node(std::move(a));
}
Formula f_exists(std::string var, std::string sort, Formula f) {
  Assertion a;
  a.kind = Assertion::Kind::Exists;
  a.qvar = std::move(var);
  a.qsort = std::move(sort);
  a.kids = {std::move(f)};
  return node(std::move(a));
}
Formula f_forall(std::string var, std::string sort, Formula f) {
  Assertion a;
  a.kind = Assertion::Kind::Forall;
  a.qvar = std::move(var);
  a.qsort = std::move(sort);
  a.kids = {std::move(f)};
  return node(std::move(a));
}
Formula f_true() { return f_and({}); }
Formula f_false() { return f_or({}); }

uint64_t formula_size(const Formula& f) {
  switch (f->kind) {
    case Assertion::Kind::Rel:
    case Assertion::Kind::Eq:
    case Assertion::Kind::EqRel:
    case Assertion::Kind::EPred:
    case Assertion::Kind::Prec:
    case Assertion::Kind::EqPrec:
      return 1;
    case Assertion::Kind::Not:
    case Assertion::Kind::Exists:
      return formula_size(f->kids[0]) + 1;
    case Assertion::Kind::Forall:
      // forall is not(exists(not f))
      return formula_size(f->kids[0]) + 3;
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies: {
      uint64_t m = 0;
      for (const auto& k : f->kids) m = std::max(m, formula_size(k));
      return m + 1;
    }
  }
  throw Error("unreachable");
}

IntSet last_events(const EvalInstance& inst, const IntSet& x) {
  IntSet out;
  for (int s : x) {
    bool latest = true;
    for (int s2 : x) {
      if (s2 == s) continue;
      if (inst.inner->leq(s, s2) && inst.label[s].is_var == inst.label[s2].is_var &&
          inst.label[s].name == inst.label[s2].name) {
        latest = false;
        break;
      }
    }
    if (latest) out.push_back(s);
  }
  return out;
}

namespace {

struct Den {
  int event;
  bool is_elem;
  Elem elem;         // when is_elem
  std::string cname; // when constant
};

std::vector<Den> denote(const Term& t, const IntSet& x, const EvalInstance& inst) {
  std::vector<Den> out;
  IntSet last = last_events(inst, x);
  switch (t.kind) {
    case Term::Kind::Var:
      for (int s : last)
        if (inst.label[s].is_var && inst.label[s].name == t.name &&
            !inst.rho[s].id.empty())
          out.push_back({s, true, inst.rho[s], ""});
      break;
    case Term::Kind::Const:
      for (int s : x) {
        if (inst.label[s].is_var || inst.label[s].name != t.name) continue;
        bool latest = true;
        for (int s2 : x) {
          if (s2 == s) continue;
          if (inst.game_le(s, s2) && !inst.label[s2].is_var &&
              (*inst.pol)[s] == (*inst.pol)[s2])
            latest = false;
        }
        if (latest) out.push_back({s, false, {}, t.name});
      }
      break;
    case Term::Kind::Elem:
      for (int s : last)
        if (inst.label[s].is_var && inst.rho[s] == t.elem)
          out.push_back({s, true, t.elem, ""});
      break;
  }
  return out;
}

Term subst_term(const Term& t, const std::string& var, const Elem& a) {
  if (t.kind == Term::Kind::Var && t.name == var) return Term::of_elem(a);
  return t;
}

Formula subst(const Formula& f, const std::string& var, const Elem& a) {
  Assertion out = *f;
  for (auto& t : out.terms) t = subst_term(t, var, a);
  if ((f->kind == Assertion::Kind::Exists || f->kind == Assertion::Kind::Forall) &&
      f->qvar == var)
    return f;  // shadowed
  for (auto& k : out.kids) k = subst(k, var, a);
  return std::make_shared<Assertion>(std::move(out));
}

}  // namespace

bool satisfies(const IntSet& x, const Formula& f, const EvalInstance& inst) {
  switch (f->kind) {
    case Assertion::Kind::Rel: {
      const auto& ar = inst.value->sig().arity(f->rel);
      if (ar.size() != f->terms.size()) throw Error("arity mismatch in " + f->rel);
      std::vector<std::vector<Den>> dens;
      for (const auto& t : f->terms) {
        auto d = denote(t, x, inst);
        d.erase(std::remove_if(d.begin(), d.end(), [](const Den& e) { return !e.is_elem; }),
                d.end());
        if (d.empty()) return false;
        dens.push_back(std::move(d));
      }
      std::vector<size_t> idx(dens.size(), 0);
      while (true) {
        Tuple tup;
        bool sorted_ok = true;
        for (size_t i = 0; i < dens.size(); ++i) {
          const Elem& e = dens[i][idx[i]].elem;
          if (e.sort != ar[i]) sorted_ok = false;
          tup.push_back(e.id);
        }
        if (sorted_ok && inst.value->holds(f->rel, tup)) return true;
        size_t i = 0;
        for (; i < dens.size(); ++i) {
          if (++idx[i] < dens[i].size()) break;
          idx[i] = 0;
        }
        if (i == dens.size()) return false;
      }
    }
    case Assertion::Kind::Eq:
    case Assertion::Kind::EqRel: {
      auto d1 = denote(f->terms[0], x, inst);
      auto d2 = denote(f->terms[1], x, inst);
      for (const auto& a : d1) {
        if (!a.is_elem) continue;
        for (const auto& b : d2) {
          if (!b.is_elem) continue;
          if (f->kind == Assertion::Kind::Eq) {
            if (a.elem == b.elem) return true;
          } else {
            if (a.elem.sort == b.elem.sort &&
                inst.value->eq_holds(a.elem.sort, a.elem.id, b.elem.id))
              return true;
          }
        }
      }
      return false;
    }
    case Assertion::Kind::EPred:
      return !denote(f->terms[0], x, inst).empty();
    case Assertion::Kind::Prec:
    case Assertion::Kind::EqPrec: {
      auto d2 = denote(f->terms[1], x, inst);
      for (const auto& b : d2) {
        IntSet hist;
        for (int p : inst.inner->preds(b.event)) hist.push_back(p);
        hist.push_back(b.event);
        std::sort(hist.begin(), hist.end());
        auto d1 = denote(f->terms[0], hist, inst);
        for (const auto& a : d1) {
          if (!inst.game_lt(a.event, b.event)) continue;
          if (f->kind == Assertion::Kind::Prec) return true;
          if (a.is_elem && b.is_elem && a.elem == b.elem) return true;
        }
      }
      return false;
    }
    case Assertion::Kind::And:
      for (const auto& k : f->kids)
        if (!satisfies(x, k, inst)) return false;
      return true;
    case Assertion::Kind::Or:
      for (const auto& k : f->kids)
        if (satisfies(x, k, inst)) return true;
      return false;
    case Assertion::Kind::Not:
      return !satisfies(x, f->kids[0], inst);
    case Assertion::Kind::Implies:
      return !satisfies(x, f->kids[0], inst) || satisfies(x, f->kids[1], inst);
    case Assertion::Kind::Exists: {
      for (const auto& id : inst.value->carrier(f->qsort)) {
        Elem a{f->qsort, id};
        if (!satisfies(x, f_epred(Term::of_elem(a)), inst)) continue;
        if (satisfies(x, subst(f->kids[0], f->qvar, a), inst)) return true;
      }
      return false;
    }
    case Assertion::Kind::Forall: {
      Formula desugared = f_not(f_exists(f->qvar, f->qsort, f_not(f->kids[0])));
      return satisfies(x, desugared, inst);
    }
  }
  throw Error("unreachable");
}

namespace {

std::string print_term(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return t.name;
    case Term::Kind::Elem:
      return "@" + t.elem.sort + ":" + t.elem.id;
  }
  throw Error("unreachable");
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  auto terms = [&] {
    std::string s;
    for (const auto& t : f->terms) s += " " + print_term(t);
    return s;
  };
  switch (f->kind) {
    case Assertion::Kind::Rel:
      os << "(rel " << f->rel << terms() << ")";
      break;
    case Assertion::Kind::Eq:
      os << "(eq" << terms() << ")";
      break;
    case Assertion::Kind::EqRel:
      os << "(eqr" << terms() << ")";
      break;
    case Assertion::Kind::EPred:
      os << "(E" << terms() << ")";
      break;
    case Assertion::Kind::Prec:
      os << "(prec" << terms() << ")";
      break;
    case Assertion::Kind::EqPrec:
      os << "(eqprec" << terms() << ")";
      break;
    case Assertion::Kind::And:
    case Assertion::Kind::Or: {
      os << (f->kind == Assertion::Kind::And ? "(and" : "(or");
      for (const auto& k : f->kids) os << " " << print_formula(k);
      os << ")";
      break;
    }
    case Assertion::Kind::Not:
      os << "(not " << print_formula(f->kids[0]) << ")";
      break;
    case Assertion::Kind::Implies:
      os << "(implies " << print_formula(f->kids[0]) << " " << print_formula(f->kids[1])
         << ")";
      break;
    case Assertion::Kind::Exists:
    case Assertion::Kind::Forall:
      os << (f->kind == Assertion::Kind::Exists ? "(exists " : "(forall ") << f->qvar
         << ":" << f->qsort << " " << print_formula(f->kids[0]) << ")";
      break;
  }
  return os.str();
}

namespace {

struct Tokens {
  std::vector<std::string> toks;
  size_t pos = 0;
  const std::string& peek() {
    if (pos >= toks.size()) throw Error("formula parse: unexpected end");
    return toks[pos];
  }
  std::string next() {
    auto t = peek();
    ++pos;
    return t;
  }
};

Term parse_term(const std::string& tok, const TermResolver& resolve) {
  if (!tok.empty() && tok[0] == '@') {
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw Error("bad element term " + tok);
    return Term::of_elem({tok.substr(1, colon - 1), tok.substr(colon + 1)});
  }
  if (resolve) {
    auto t = resolve(tok);
    if (!t) throw Error("unresolved term " + tok);
    return *t;
  }
  throw Error("no resolver for term " + tok);
}

Formula parse_rec(Tokens& tk, const TermResolver& resolve) {
  if (tk.next() != "(") throw Error("formula parse: expected (");
  std::string head = tk.next();
  auto terms_until_close = [&] {
    std::vector<Term> ts;
    while (tk.peek() != ")") ts.push_back(parse_term(tk.next(), resolve));
    tk.next();
    return ts;
  };
  auto kids_until_close = [&] {
    std::vector<Formula> ks;
    while (tk.peek() != ")") ks.push_back(parse_rec(tk, resolve));
    tk.next();
    return ks;
  };
  if (head == "rel") {
    std::string r = tk.next();
    return f_rel(r, terms_until_close());
  }
  if (head == "eq") {
    auto ts = terms_until_close();
    if (ts.size() != 2) throw Error("eq takes two terms");
    return f_eq(ts[0], ts[1]);
  }
  if (head == "eqr") {
    auto ts = terms_until_close();
    if (ts.size() != 2) throw Error("eqr takes two terms");
    return f_eqrel(ts[0], ts[1]);
  }
  if (head == "E") {
    auto ts = terms_until_close();
    if (ts.size() != 1) throw Error("E takes one term");
    return f_epred(ts[0]);
  }
  if (head == "prec" || head == "eqprec") {
    auto ts = terms_until_close();
    if (ts.size() != 2) throw Error(head + " takes two terms");
    return head == "prec" ? f_prec(ts[0], ts[1]) : f_eqprec(ts[0], ts[1]);
  }
  if (head == "and") return f_and(kids_until_close());
  if (head == "or") return f_or(kids_until_close());
  if (head == "not") {
    auto ks = kids_until_close();
    if (ks.size() != 1) throw Error("not takes one formula");
    return f_not(ks[0]);
  }
  if (head == "implies") {
    auto ks = kids_until_close();
    if (ks.size() != 2) throw Error("implies takes two formulas");
    return f_implies(ks[0], ks[1]);
  }
  if (head == "exists" || head == "forall") {
    std::string binder = tk.next();
    auto colon = binder.find(':');
    if (colon == std::string::npos) throw Error("quantifier binder needs var:sort");
    std::string var = binder.substr(0, colon), sort = binder.substr(colon + 1);
    auto ks = kids_until_close();
    if (ks.size() != 1) throw Error("quantifier takes one formula");
    return head == "exists" ? f_exists(var, sort, ks[0]) : f_forall(var, sort, ks[0]);
  }
  throw Error("unknown formula head " + head);
}

}  // namespace

Formula parse_formula(const std::string& text, const TermResolver& resolve) {
  Tokens tk;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) {
        tk.toks.push_back(cur);
        cur.clear();
      }
      tk.toks.push_back(std::string(1, c));
    } else if (isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        tk.toks.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tk.toks.push_back(cur);
  Formula f = parse_rec(tk, resolve);
  if (tk.pos != tk.toks.size()) throw Error("trailing tokens in formula");
  return f;
}

}  // namespace esg
