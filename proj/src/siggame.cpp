#include "esg/siggame.hpp"

#include <algorithm>
#include <sstream>

namespace esg {

SigGamePtr make_siggame(EspPtr esp, std::vector<SigLabel> vc, Signature sigma,
                        Formula winning) {
  if (vc.size() != esp->size()) throw Error("labelling size mismatch");
  std::string w;
  if (has_neutral(*esp)) throw Error("signature game with neutral event");
  if (!race_free(*esp, &w)) throw Error("signature game not race-free: " + w);
  const EventStructure& es = esp->es;
  for (size_t i = 0; i < es.size(); ++i) {
    if (vc[i].is_var && !sigma.has_sort(vc[i].sort))
      throw Error("variable " + vc[i].name + " has unknown sort " + vc[i].sort);
    for (size_t j = i + 1; j < es.size(); ++j) {
      bool same = vc[i] == vc[j];
      if (es.concurrent(static_cast<int>(i), static_cast<int>(j)) &&
          vc[i].name == vc[j].name && vc[i].is_var == vc[j].is_var)
        throw Error("concurrent events share label " + vc[i].name);
      if (same && esp->pol[i] != esp->pol[j])
        throw Error("label " + vc[i].name + " used at both polarities");
    }
  }
  // Derived: same-labelled events in a configuration are totally ordered.
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = i + 1; j < es.size(); ++j)
      if (vc[i].name == vc[j].name && vc[i].is_var == vc[j].is_var &&
          es.concurrent(static_cast<int>(i), static_cast<int>(j)))
        throw Error("same-labelled events not causally related");
  auto g = std::make_shared<SigGame>();
  g->esp = std::move(esp);
  g->vc = std::move(vc);
  g->sigma = std::move(sigma);
  g->winning = std::move(winning);
  return g;
}

Formula rename_formula(const Formula& f, const std::string& prefix) {
  Assertion out = *f;
  auto rt = [&](Term& t) {
    switch (t.kind) {
      case Term::Kind::Var:
      case Term::Kind::Const:
        t.name = prefix + t.name;
        break;
      case Term::Kind::Elem:
        t.elem.sort = prefix + t.elem.sort;
        break;
    }
  };
  for (auto& t : out.terms) rt(t);
  if (out.kind == Assertion::Kind::Rel) out.rel = prefix + out.rel;
  if (out.kind == Assertion::Kind::Exists || out.kind == Assertion::Kind::Forall) {
    out.qvar = prefix + out.qvar;
    out.qsort = prefix + out.qsort;
  }
  for (auto& k : out.kids) k = rename_formula(k, prefix);
  return std::make_shared<Assertion>(std::move(out));
}

SigGamePtr dual_siggame(const SigGamePtr& g) {
  auto d = std::make_shared<SigGame>();
  d->esp = dual_esp(g->esp);
  d->vc = g->vc;
  d->sigma = g->sigma;
  d->winning = f_not(g->winning);
  return d;
}

namespace {

Signature sum_signature(const Signature& a, const Signature& b) {
  std::vector<std::string> sorts;
  std::map<std::string, std::vector<std::string>> rels;
  auto lift = [&](const Signature& s, const std::string& pre) {
    for (const auto& x : s.sorts()) sorts.push_back(pre + x);
    for (const auto& [r, ar] : s.relations()) {
      std::vector<std::string> t;
      for (const auto& x : ar) t.push_back(pre + x);
      rels[pre + r] = t;
    }
  };
  lift(a, "l.");
  lift(b, "r.");
  return Signature(sorts, rels);
}

std::vector<SigLabel> parallel_labels(const ParallelEsp& par, const SigGame& a,
                                      const SigGame& b) {
  std::vector<SigLabel> vc(par.esp->size());
  for (size_t e = 0; e < par.esp->size(); ++e) {
    const SigGame& src = par.component[e] == 0 ? a : b;
    std::string pre = par.component[e] == 0 ? "l." : "r.";
    SigLabel l = src.vc[par.orig[e]];
    l.name = pre + l.name;
    if (l.is_var) l.sort = pre + l.sort;
    vc[e] = l;
  }
  return vc;
}

}  // namespace

ParallelSigGame parallel_siggame(const SigGamePtr& a, const SigGamePtr& b) {
  ParallelSigGame out;
  out.par = parallel_esp(a->esp, b->esp);
  Formula w = f_or({rename_formula(a->winning, "l."), rename_formula(b->winning, "r.")});
  out.game = make_siggame(out.par.esp, parallel_labels(out.par, *a, *b),
                          sum_signature(a->sigma, b->sigma), w);
  return out;
}

ParallelSigGame hom_siggame(const SigGamePtr& g, const SigGamePtr& h) {
  ParallelSigGame out;
  SigGamePtr gd = dual_siggame(g);
  out.par = parallel_esp(gd->esp, h->esp);
  Formula w =
      f_implies(rename_formula(g->winning, "l."), rename_formula(h->winning, "r."));
  out.game = make_siggame(out.par.esp, parallel_labels(out.par, *gd, *h),
                          sum_signature(g->sigma, h->sigma), w);
  return out;
}

EvalInstance Instantiation::eval() const {
  EvalInstance ev;
  ev.inner = &S->es;
  ev.pol = &S->pol;
  ev.label.resize(S->size());
  for (size_t s = 0; s < S->size(); ++s) {
    const SigLabel& l = G->vc[sigma[s]];
    ev.label[s] = {l.is_var, l.name, l.sort};
  }
  ev.sigma = sigma;
  ev.game_leq = &G->esp->es.leq_mat();
  ev.rho = rho;
  ev.value = A.get();
  return ev;
}

bool Instantiation::wins(const IntSet& x) const { return satisfies(x, G->winning, eval()); }

void validate_instantiation(const Instantiation& inst) {
  if (inst.sigma.size() != inst.S->size() || inst.rho.size() != inst.S->size())
    throw Error("instantiation arity mismatch");
  Strategy st = inst.strategy();
  std::string w;
  if (!is_es_map(st.es_map(), &w)) throw Error("sigma is not a map: " + w);
  for (size_t s = 0; s < inst.S->size(); ++s) {
    if (inst.sigma[s] < 0) throw Error("sigma must be total");
    if (inst.S->pol[s] != inst.G->esp->pol[inst.sigma[s]])
      throw Error("sigma does not preserve polarity at " +
                  inst.S->es.id(static_cast<int>(s)));
    const SigLabel& l = inst.G->vc[inst.sigma[s]];
    if (l.is_var) {
      if (inst.rho[s].id.empty()) continue;  // unvalued variable move is legal
      if (inst.rho[s].sort != l.sort)
        throw Error("rho sort mismatch at " + inst.S->es.id(static_cast<int>(s)));
      const auto& ids = inst.A->carrier(l.sort);
      if (!std::binary_search(ids.begin(), ids.end(), inst.rho[s].id))
        throw Error("rho value not in carrier at " + inst.S->es.id(static_cast<int>(s)));
    } else if (!inst.rho[s].id.empty()) {
      throw Error("rho defined on a constant move " + inst.S->es.id(static_cast<int>(s)));
    }
  }
}

IntSet last_moves(const Instantiation& inst, const IntSet& x) {
  return last_events(inst.eval(), x);
}

std::vector<char> all_var_moves(const SigGame& g) {
  std::vector<char> out(g.size(), 0);
  for (size_t e = 0; e < g.size(); ++e) out[e] = g.vc[e].is_var ? 1 : 0;
  return out;
}

std::vector<char> opponent_var_moves(const SigGame& g) {
  std::vector<char> out(g.size(), 0);
  for (size_t e = 0; e < g.size(); ++e)
    out[e] = (g.vc[e].is_var && g.esp->pol[e] == Pol::Neg) ? 1 : 0;
  return out;
}

namespace {

std::string expn_event_id(const SigGame& g, int ge, const std::map<int, Elem>& val) {
  std::ostringstream os;
  os << g.esp->es.id(ge) << "[";
  bool first = true;
  for (const auto& [m, e] : val) {
    if (!first) os << ",";
    first = false;
    os << g.esp->es.id(m) << "=" << e.id;
  }
  os << "]";
  return os.str();
}

}  // namespace

Elem Expansion::value(int e) const {
  auto it = gamma[e].find(eps[e]);
  if (it == gamma[e].end()) return {};
  return it->second;
}

EvalInstance Expansion::eval() const {
  EvalInstance ev;
  ev.inner = &esp->es;
  ev.pol = &esp->pol;
  ev.label.resize(esp->size());
  ev.sigma = eps;
  for (size_t e = 0; e < esp->size(); ++e) {
    const SigLabel& l = G->vc[eps[e]];
    ev.label[e] = {l.is_var, l.name, l.sort};
  }
  ev.game_leq = &G->esp->es.leq_mat();
  ev.rho.resize(esp->size());
  for (size_t e = 0; e < esp->size(); ++e) ev.rho[e] = value(static_cast<int>(e));
  ev.value = A.get();
  return ev;
}

bool Expansion::wins(const IntSet& x) const { return satisfies(x, G->winning, eval()); }

int Expansion::find_event(int g, const std::map<int, Elem>& val) const {
  const std::string id = expn_event_id(*G, g, val);
  if (!esp->es.has(id)) return -1;
  return esp->es.index(id);
}

Expansion expand(SigGamePtr G, StructPtr A, const std::vector<char>& expand_set,
                 size_t cap_events) {
  const EventStructure& es = G->esp->es;
  size_t n = es.size();
  // Count first; fail loudly with the required size.
  unsigned long long total = 0;
  std::vector<std::vector<int>> exp_below(n);
  for (size_t g = 0; g < n; ++g) {
    for (int p : es.preds(static_cast<int>(g)))
      if (expand_set[p]) exp_below[g].push_back(p);
    if (expand_set[g]) exp_below[g].push_back(static_cast<int>(g));
    std::sort(exp_below[g].begin(), exp_below[g].end());
    unsigned long long count = 1;
    for (int m : exp_below[g]) {
      size_t k = A->carrier(G->vc[m].sort).size();
      count *= k;
      if (count > 100000000ull) throw Error("expansion size overflow");
    }
    total += count;
  }
  if (total > cap_events)
    throw Error("expansion cap exceeded: needs " + std::to_string(total) +
                " events, cap " + std::to_string(cap_events));

  Expansion out;
  out.G = G;
  out.A = A;
  out.expanded = expand_set;
  std::vector<std::pair<int, std::map<int, Elem>>> events;
  for (size_t g = 0; g < n; ++g) {
    const auto& dom = exp_below[g];
    std::vector<const std::vector<std::string>*> choices;
    for (int m : dom) choices.push_back(&A->carrier(G->vc[m].sort));
    std::vector<size_t> idx(dom.size(), 0);
    while (true) {
      std::map<int, Elem> val;
      for (size_t i = 0; i < dom.size(); ++i)
        val[dom[i]] = Elem{G->vc[dom[i]].sort, (*choices[i])[idx[i]]};
      events.emplace_back(static_cast<int>(g), std::move(val));
      size_t i = 0;
      for (; i < dom.size(); ++i) {
        if (++idx[i] < choices[i]->size()) break;
        idx[i] = 0;
      }
      if (i == dom.size()) break;
    }
  }

  EventStructure::Builder bld;
  for (const auto& [g, val] : events) bld.event(expn_event_id(*G, g, val));
  // immediate dependencies through covers of G
  auto restrict_val = [&](const std::map<int, Elem>& val, int g2) {
    std::map<int, Elem> out2;
    for (int m : exp_below[g2]) out2[m] = val.at(m);
    return out2;
  };
  for (const auto& [g, val] : events) {
    std::string me = expn_event_id(*G, g, val);
    for (size_t g2 = 0; g2 < n; ++g2)
      if (std::find(es.covers()[g2].begin(), es.covers()[g2].end(), g) !=
          es.covers()[g2].end())
        bld.dep(expn_event_id(*G, static_cast<int>(g2), restrict_val(val, static_cast<int>(g2))),
                me);
  }
  // conflict seeds: lifted immediate conflicts of G, and same-move value splits
  for (const auto& [ga, gb] : es.immediate_conflicts()) {
    for (const auto& [g1, v1] : events) {
      if (g1 != ga) continue;
      for (const auto& [g2, v2] : events)
        if (g2 == gb)
          bld.conflict(expn_event_id(*G, g1, v1), expn_event_id(*G, g2, v2));
    }
  }
  for (const auto& [g1, v1] : events) {
    if (!expand_set[g1]) continue;
    for (const auto& [g2, v2] : events) {
      if (g1 != g2) continue;
      if (v1.at(g1).id < v2.at(g2).id)
        bld.conflict(expn_event_id(*G, g1, v1), expn_event_id(*G, g2, v2));
    }
  }

  EventStructure ees = bld.build();
  std::vector<Pol> pol(ees.size());
  out.eps.resize(ees.size());
  out.gamma.resize(ees.size());
  for (const auto& [g, val] : events) {
    int e = ees.index(expn_event_id(*G, g, val));
    out.eps[e] = g;
    out.gamma[e] = val;
    pol[e] = G->esp->pol[g];
  }
  out.esp = make_esp(std::move(ees), std::move(pol));
  return out;
}

std::vector<int> universal_map(const Instantiation& inst, const Expansion& expn) {
  const EventStructure& ses = inst.S->es;
  const EventStructure& ges = inst.G->esp->es;
  std::vector<int> out(ses.size(), -1);
  for (size_t s = 0; s < ses.size(); ++s) {
    int g = inst.sigma[s];
    // gamma is read off rho along the game predecessors of g: for each
    // expanded g' <= g there is a unique s' <= s over it.
    std::map<int, Elem> val;
    IntSet gpreds;
    for (int p : ges.preds(g)) gpreds.push_back(p);
    gpreds.push_back(g);
    for (int gp : gpreds) {
      if (!expn.expanded[gp]) continue;
      int carrier = -1;
      if (inst.sigma[s] == gp) carrier = static_cast<int>(s);
      for (int p : ses.preds(static_cast<int>(s)))
        if (inst.sigma[p] == gp) {
          if (carrier >= 0)
            throw Error("ambiguous preimage of " + ges.id(gp) + " below " +
                        ses.id(static_cast<int>(s)));
          carrier = p;
        }
      if (carrier < 0)
        throw Error("no preimage of " + ges.id(gp) + " below " +
                    ses.id(static_cast<int>(s)));
      if (inst.rho[carrier].id.empty())
        throw Error("instantiation has no value for expanded move " +
                    ses.id(carrier));
      val[gp] = inst.rho[carrier];
    }
    int e = expn.find_event(g, val);
    if (e < 0)
      throw Error("no expansion event for " + ses.id(static_cast<int>(s)));
    out[s] = e;
  }
  return out;
}

InstReport check_strategy_over_structure(const Instantiation& inst, size_t cap) {
  validate_instantiation(inst);
  InstReport r;
  Expansion expn = expand(inst.G, inst.A, all_var_moves(*inst.G));
  std::vector<int> s0 = universal_map(inst, expn);
  Strategy strat{inst.S, expn.esp, s0};
  r.via_expansion = check_strategy(strat, cap);

  // Checker (b): explicit characterisation.
  const EventStructure& ses = inst.S->es;
  const SigGame& G = *inst.G;
  r.explicit_receptive = true;
  for_each_configuration(ses, [&](const IntSet& x) {
    if (!r.explicit_receptive) return;
    BitSet bx(ses.size()), bgx(G.size());
    for (int s : x) bx.set(s);
    for (int s : x) bgx.set(inst.sigma[s]);
    for (size_t g = 0; g < G.size(); ++g) {
      if (G.esp->pol[g] != Pol::Neg) continue;
      if (!G.esp->es.enabled(static_cast<int>(g), bgx)) continue;
      if (!G.vc[g].is_var) {
        int count = 0;
        for (size_t s = 0; s < ses.size(); ++s)
          if (inst.sigma[s] == static_cast<int>(g) && ses.enabled(static_cast<int>(s), bx))
            ++count;
        if (count != 1) {
          r.explicit_receptive = false;
          r.witness = "explicit receptivity fails for constant " + G.esp->es.id(static_cast<int>(g));
          return;
        }
      } else {
        for (const auto& aid : inst.A->carrier(G.vc[g].sort)) {
          int count = 0;
          for (size_t s = 0; s < ses.size(); ++s)
            if (inst.sigma[s] == static_cast<int>(g) && inst.rho[s].id == aid &&
                ses.enabled(static_cast<int>(s), bx))
              ++count;
          if (count != 1) {
            r.explicit_receptive = false;
            r.witness = "explicit receptivity fails for " +
                        G.esp->es.id(static_cast<int>(g)) + " := " + aid;
            return;
          }
        }
      }
    }
  });
  r.explicit_innocent = true;
  for (size_t s = 0; s < ses.size(); ++s)
    for (int s2 : ses.covers()[s]) {
      if (!(inst.S->pol[s] == Pol::Pos || inst.S->pol[s2] == Pol::Neg)) continue;
      const auto& cov = G.esp->es.covers()[inst.sigma[s]];
      if (std::find(cov.begin(), cov.end(), inst.sigma[s2]) == cov.end())
        r.explicit_innocent = false;
    }
  r.checkers_agree = (r.via_expansion.receptive == r.explicit_receptive) &&
                     (r.via_expansion.innocent == r.explicit_innocent);

  r.deterministic = r.via_expansion.deterministic;
  MapClass mc = classify_map(strat.es_map(), cap);
  r.rigid = mc.rigid;
  r.open = mc.open;
  r.winning = true;
  for (const auto& x : plus_maximal_configs(*inst.S))
    if (!inst.wins(x)) {
      r.winning = false;
      break;
    }
  return r;
}

RedStrategy make_red(SigGamePtr G, StructPtr A, SigGamePtr H, StructPtr B, EspPtr S,
                     std::vector<int> sigma, std::vector<Elem> rho) {
  RedStrategy out;
  out.G = G;
  out.H = H;
  out.A = A;
  out.B = B;
  out.hom = hom_siggame(G, H);
  out.inst.S = std::move(S);
  out.inst.G = out.hom.game;
  out.inst.sigma = std::move(sigma);
  out.inst.rho = std::move(rho);
  out.inst.A = std::make_shared<Structure>(sum(*A, *B));
  validate_instantiation(out.inst);
  return out;
}

RedStrategy red_copycat(const SigGamePtr& G, const StructPtr& A) {
  Expansion expn = expand(G, A, all_var_moves(*G));
  Copycat cc = copycat(expn.esp);
  const Esp& inner = *cc.strat.inner;
  ParallelSigGame hom = hom_siggame(G, G);
  std::vector<int> sigma(inner.size());
  std::vector<Elem> rho(inner.size());
  for (size_t e = 0; e < inner.size(); ++e) {
    const std::string& id = inner.es.id(static_cast<int>(e));
    std::string pre = id.substr(0, 2);
    int xe = expn.esp->es.index(id.substr(2));
    sigma[e] = hom.game->esp->es.index(pre + G->esp->es.id(expn.eps[xe]));
    Elem v = expn.value(xe);
    if (!v.id.empty()) rho[e] = Elem{pre + v.sort, v.id};
  }
  RedStrategy out;
  out.G = G;
  out.H = G;
  out.A = A;
  out.B = A;
  out.hom = hom;
  out.inst.S = cc.strat.inner;
  out.inst.G = hom.game;
  out.inst.sigma = std::move(sigma);
  out.inst.rho = std::move(rho);
  out.inst.A = std::make_shared<Structure>(sum(*A, *A));
  validate_instantiation(out.inst);
  return out;
}

bool red_winning(const RedStrategy& s) {
  for (const auto& x : plus_maximal_configs(*s.inst.S))
    if (!s.inst.wins(x)) return false;
  return true;
}

RedStrategy compose_red(const RedStrategy& s1, const RedStrategy& s2, size_t state_cap) {
  if (s1.H->esp->es.ids() != s2.G->esp->es.ids())
    throw Error("compose_red: middle games differ");
  HomGame gab = hom_game(s1.G->esp, s1.H->esp);
  HomGame gbc = hom_game(s2.G->esp, s2.H->esp);
  HomGame gac = hom_game(s1.G->esp, s2.H->esp);
  Strategy sg1 = s1.inst.strategy();
  sg1.game = gab.esp();  // same ids by construction
  Strategy sg2 = s2.inst.strategy();
  sg2.game = gbc.esp();

  auto base = [](const Elem& e) {
    return Elem{e.sort.substr(2), e.id};
  };
  SyncFilter values_agree = [&](int s, int t) {
    const Elem& a = s1.inst.rho[s];
    const Elem& b = s2.inst.rho[t];
    if (a.id.empty() && b.id.empty()) return true;
    if (a.id.empty() || b.id.empty()) return false;
    return base(a) == base(b);
  };
  ComposeResult comp =
      compose_strategies(sg1, gab, sg2, gbc, gac, values_agree, state_cap);

  const Esp& inner = *comp.strat.inner;
  std::vector<Elem> rho(inner.size());
  std::vector<int> sigma(inner.size());
  // Recover the composed instantiation from the hidden events' top atoms.
  std::vector<int> vis;
  for (size_t e = 0; e < comp.interaction->size(); ++e)
    if (comp.inter_hidden[e] >= 0) vis.push_back(static_cast<int>(e));
  for (int e : vis) {
    int h = comp.inter_hidden[e];
    sigma[h] = comp.strat.map[h];
    if (comp.inter_s[e] >= 0 && comp.inter_t[e] < 0) {
      rho[h] = s1.inst.rho[comp.inter_s[e]];  // over G⊥: l.-tagged in A+B
    } else if (comp.inter_t[e] >= 0 && comp.inter_s[e] < 0) {
      rho[h] = s2.inst.rho[comp.inter_t[e]];  // over K: r.-tagged in B+C
    }
  }
  RedStrategy out;
  out.G = s1.G;
  out.H = s2.H;
  out.A = s1.A;
  out.B = s2.B;
  out.hom = hom_siggame(s1.G, s2.H);
  out.inst.S = comp.strat.inner;
  out.inst.G = out.hom.game;
  out.inst.sigma = std::move(sigma);
  out.inst.rho = std::move(rho);
  out.inst.A = std::make_shared<Structure>(sum(*s1.A, *s2.B));
  validate_instantiation(out.inst);
  return out;
}

std::optional<std::vector<int>> find_red_iso(const RedStrategy& a, const RedStrategy& b) {
  Strategy sa = a.inst.strategy();
  Strategy sb = b.inst.strategy();
  if (a.hom.game->esp->es.ids() != b.hom.game->esp->es.ids()) return std::nullopt;
  sb.game = a.hom.game->esp;  // identify by ids
  auto iso = find_strategy_iso(sa, sb);
  if (!iso) return std::nullopt;
  for (size_t s = 0; s < a.inst.S->size(); ++s)
    if (a.inst.rho[s] != b.inst.rho[(*iso)[s]]) return std::nullopt;
  return iso;
}

}  // namespace esg
