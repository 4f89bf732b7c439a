#include "esg/games.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace esg {

EspPtr make_esp(EventStructure es, std::vector<Pol> pol) {
  if (pol.size() != es.size()) throw Error("polarity vector size mismatch");
  auto p = std::make_shared<Esp>();
  p->es = std::move(es);
  p->pol = std::move(pol);
  return p;
}

bool has_neutral(const Esp& e) {
  for (Pol p : e.pol)
    if (p == Pol::Neu) return true;
  return false;
}

bool race_free(const Esp& e, std::string* witness) {
  for (const auto& [a, b] : e.es.immediate_conflicts()) {
    if (e.pol[a] != e.pol[b] && e.pol[a] != Pol::Neu && e.pol[b] != Pol::Neu) {
      if (witness)
        *witness = "immediate conflict between " + e.es.id(a) + " and " + e.es.id(b) +
                   " of opposite polarity";
      return false;
    }
  }
  return true;
}

EspPtr dual_esp(const EspPtr& a) {
  auto p = std::make_shared<Esp>();
  p->es = a->es;
  p->pol.reserve(a->pol.size());
  for (Pol q : a->pol) p->pol.push_back(flip(q));
  return p;
}

IntSet ParallelEsp::left_part(const IntSet& x) const {
  IntSet out;
  for (int e : x)
    if (component[e] == 0) out.push_back(orig[e]);
  std::sort(out.begin(), out.end());
  return out;
}

IntSet ParallelEsp::right_part(const IntSet& x) const {
  IntSet out;
  for (int e : x)
    if (component[e] == 1) out.push_back(orig[e]);
  std::sort(out.begin(), out.end());
  return out;
}

ParallelEsp parallel_esp(const EspPtr& a, const EspPtr& b) {
  EventStructure::Builder bld;
  for (const auto& id : a->es.ids()) bld.event("l." + id);
  for (const auto& id : b->es.ids()) bld.event("r." + id);
  auto add_rels = [&](const EventStructure& es, const std::string& pre) {
    for (size_t i = 0; i < es.size(); ++i) {
      for (int j : es.covers()[i]) bld.dep(pre + es.id(i), pre + es.id(j));
      for (size_t j = i + 1; j < es.size(); ++j)
        if (es.conflict(i, j)) bld.conflict(pre + es.id(i), pre + es.id(j));
    }
  };
  add_rels(a->es, "l.");
  add_rels(b->es, "r.");
  ParallelEsp out;
  EventStructure es = bld.build();
  size_t n = es.size();
  std::vector<Pol> pol(n);
  out.component.assign(n, -1);
  out.orig.assign(n, -1);
  out.from_left.assign(a->size(), -1);
  out.from_right.assign(b->size(), -1);
  for (size_t e = 0; e < n; ++e) {
    const std::string& id = es.id(static_cast<int>(e));
    if (id.rfind("l.", 0) == 0) {
      int o = a->es.index(id.substr(2));
      out.component[e] = 0;
      out.orig[e] = o;
      out.from_left[o] = static_cast<int>(e);
      pol[e] = a->pol[o];
    } else {
      int o = b->es.index(id.substr(2));
      out.component[e] = 1;
      out.orig[e] = o;
      out.from_right[o] = static_cast<int>(e);
      pol[e] = b->pol[o];
    }
  }
  out.esp = make_esp(std::move(es), std::move(pol));
  return out;
}

GameW dual(const GameW& g) {
  GameW out;
  out.esp = dual_esp(g.esp);
  WinPred inner = g.win;
  out.win = [inner](const IntSet& x) { return !inner(x); };
  return out;
}

ParallelGameW parallel(const GameW& a, const GameW& b) {
  ParallelGameW out;
  out.par = parallel_esp(a.esp, b.esp);
  out.game.esp = out.par.esp;
  WinPred wa = a.win, wb = b.win;
  ParallelEsp par = out.par;
  out.game.win = [wa, wb, par](const IntSet& x) {
    return wa(par.left_part(x)) || wb(par.right_part(x));
  };
  return out;
}

HomGame hom_game(const EspPtr& a, const EspPtr& b) {
  HomGame g;
  g.left = a;
  g.right = b;
  g.par = parallel_esp(dual_esp(a), b);
  return g;
}

ESMap Strategy::es_map() const {
  ESMap f;
  f.src = es_of(inner);
  f.dst = es_of(game);
  f.map = map;
  return f;
}

IntSet Strategy::image(const IntSet& x) const {
  IntSet out;
  for (int e : x) out.push_back(map[e]);
  std::sort(out.begin(), out.end());
  return out;
}

StrategyReport check_strategy(const Strategy& s, size_t cap) {
  StrategyReport r;
  std::string w;
  const Esp& S = *s.inner;
  const Esp& A = *s.game;
  if (!is_es_map(s.es_map(), &w)) {
    r.witness = "not a map: " + w;
    return r;
  }
  for (size_t e = 0; e < S.size(); ++e) {
    if (s.map[e] < 0) {
      r.witness = "map not total at " + S.es.id(static_cast<int>(e));
      return r;
    }
    if (S.pol[e] != A.pol[s.map[e]]) {
      r.witness = "polarity not preserved at " + S.es.id(static_cast<int>(e));
      return r;
    }
  }
  r.valid_map = true;

  if (S.size() > cap)
    throw Error("strategy check cap exceeded: " + std::to_string(S.size()) + " events");

  r.receptive = true;
  for_each_configuration(S.es, [&](const IntSet& x) {
    if (!r.receptive) return;
    BitSet bx(S.size()), bfx(A.size());
    for (int e : x) bx.set(e);
    for (int e : x) bfx.set(s.map[e]);
    for (size_t a = 0; a < A.size(); ++a) {
      if (A.pol[a] != Pol::Neg) continue;
      if (!A.es.enabled(static_cast<int>(a), bfx)) continue;
      int count = 0;
      for (size_t e = 0; e < S.size(); ++e)
        if (s.map[e] == static_cast<int>(a) && S.es.enabled(static_cast<int>(e), bx)) ++count;
      if (count != 1) {
        r.receptive = false;
        r.witness = "receptivity fails at {" + [&] {
          std::vector<std::string> ids;
          for (int e : x) ids.push_back(S.es.id(e));
          return join(ids, " ");
        }() + "} for " + A.es.id(static_cast<int>(a)) +
                    (count == 0 ? " (no lift)" : " (non-unique lift)");
        return;
      }
    }
  });

  r.innocent = true;
  for (size_t e = 0; e < S.size(); ++e)
    for (int e2 : S.es.covers()[e]) {
      if (!(S.pol[e] == Pol::Pos || S.pol[e2] == Pol::Neg)) continue;
      const auto& cov = A.es.covers()[s.map[e]];
      if (std::find(cov.begin(), cov.end(), s.map[e2]) == cov.end()) {
        r.innocent = false;
        if (r.witness.empty())
          r.witness = "innocence fails on " + S.es.id(static_cast<int>(e)) + " -> " +
                      S.es.id(e2);
      }
    }

  r.deterministic = true;
  for (const auto& [a, b] : S.es.immediate_conflicts())
    if (!(S.pol[a] == Pol::Neg && S.pol[b] == Pol::Neg)) {
      r.deterministic = false;
      if (r.witness.empty())
        r.witness = "immediate conflict " + S.es.id(a) + " ~ " + S.es.id(b) +
                    " involves a Player move";
    }
  return r;
}

Copycat copycat(const EspPtr& a) {
  std::string w;
  {
    Esp tmp{a->es, a->pol};
    if (!race_free(tmp, &w)) throw Error("copycat requires a race-free game: " + w);
  }
  Copycat cc;
  cc.game = hom_game(a, a);
  const Esp& par = *cc.game.esp();
  size_t n = par.size();
  cc.companion.assign(n, -1);
  for (size_t e = 0; e < n; ++e) {
    const std::string& id = par.es.id(static_cast<int>(e));
    std::string other = (id.rfind("l.", 0) == 0 ? "r." : "l.") + id.substr(2);
    cc.companion[e] = par.es.index(other);
  }
  EventStructure::Builder bld;
  for (size_t e = 0; e < n; ++e) bld.event(par.es.id(static_cast<int>(e)));
  for (size_t e = 0; e < n; ++e)
    for (int j : par.es.covers()[e]) bld.dep(par.es.id(static_cast<int>(e)), par.es.id(j));
  for (size_t e = 0; e < n; ++e)
    if (par.pol[e] == Pol::Pos)
      bld.dep(par.es.id(cc.companion[e]), par.es.id(static_cast<int>(e)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (par.es.conflict(i, j))
        bld.conflict(par.es.id(static_cast<int>(i)), par.es.id(static_cast<int>(j)));
  EventStructure es = bld.build();
  std::vector<Pol> pol(n);
  std::vector<int> map(n);
  for (size_t e = 0; e < n; ++e) {
    int g = par.es.index(es.id(static_cast<int>(e)));
    pol[e] = par.pol[g];
    map[e] = g;
  }
  cc.strat.inner = make_esp(std::move(es), std::move(pol));
  cc.strat.game = cc.game.esp();
  cc.strat.map = std::move(map);
  return cc;
}

ComposeResult compose_strategies(const Strategy& sigma, const HomGame& gab,
                                 const Strategy& tau, const HomGame& gbc,
                                 const HomGame& gac, const SyncFilter& value_ok,
                                 size_t state_cap) {
  const EspPtr& A = gab.left;
  const EspPtr& B = gab.right;
  const EspPtr& C = gbc.right;
  // Left leg S∥C -> A∥B∥C; right leg A∥T -> A∥B∥C. The middle is the plain
  // juxtaposition (A⊥∥B)∥C reusing gab's esp, so ids are l.l.a / l.r.b / r.c.
  ParallelEsp mid = parallel_esp(gab.esp(), C);
  ParallelEsp sc = parallel_esp(sigma.inner, C);
  ParallelEsp at = parallel_esp(dual_esp(A), tau.inner);

  ESMap leg1;
  leg1.src = es_of(sc.esp);
  leg1.dst = es_of(mid.esp);
  leg1.map.assign(sc.esp->size(), -1);
  for (size_t e = 0; e < sc.esp->size(); ++e) {
    if (sc.component[e] == 0) {
      int g = sigma.map[sc.orig[e]];
      leg1.map[e] = mid.esp->es.index("l." + gab.esp()->es.id(g));
    } else {
      leg1.map[e] = mid.esp->es.index("r." + C->es.id(sc.orig[e]));
    }
  }
  ESMap leg2;
  leg2.src = es_of(at.esp);
  leg2.dst = es_of(mid.esp);
  leg2.map.assign(at.esp->size(), -1);
  for (size_t e = 0; e < at.esp->size(); ++e) {
    if (at.component[e] == 0) {
      leg2.map[e] = mid.esp->es.index("l.l." + A->es.id(at.orig[e]));
    } else {
      int g = tau.map[at.orig[e]];
      const std::string& gid = gbc.esp()->es.id(g);
      if (gid.rfind("l.", 0) == 0)
        leg2.map[e] = mid.esp->es.index("l.r." + gid.substr(2));
      else
        leg2.map[e] = mid.esp->es.index("r." + gid.substr(2));
    }
  }

  SyncFilter filter;
  if (value_ok) {
    filter = [&sc, &at, value_ok](int u, int v) {
      if (sc.component[u] == 0 && at.component[v] == 1)
        return value_ok(sc.orig[u], at.orig[v]);
      return true;
    };
  }
  ComposeResult out;
  out.leg_sc = sc;
  out.leg_at = at;
  out.pb = pullback(leg1, leg2, state_cap, filter);

  size_t n = out.pb.apex->size();
  out.inter_s.assign(n, -1);
  out.inter_t.assign(n, -1);
  std::vector<Pol> ipol(n, Pol::Neu);
  std::vector<int> to_gac(n, -1);
  for (size_t e = 0; e < n; ++e) {
    int u = out.pb.p1.map[e], v = out.pb.p2.map[e];
    bool u_s = sc.component[u] == 0;
    bool v_t = at.component[v] == 1;
    if (u_s && !v_t) {
      int s = sc.orig[u];
      out.inter_s[e] = s;
      ipol[e] = sigma.inner->pol[s];
      int a = at.orig[v];  // event of A
      to_gac[e] = gac.esp()->es.index("l." + A->es.id(a));
    } else if (u_s && v_t) {
      out.inter_s[e] = sc.orig[u];
      out.inter_t[e] = at.orig[v];
      ipol[e] = Pol::Neu;
    } else {
      int t = at.orig[v];
      out.inter_t[e] = t;
      ipol[e] = tau.inner->pol[t];
      int c = sc.orig[u];
      to_gac[e] = gac.esp()->es.index("r." + C->es.id(c));
    }
  }
  out.interaction = make_esp(*out.pb.apex, ipol);

  IntSet visible;
  for (size_t e = 0; e < n; ++e)
    if (ipol[e] != Pol::Neu) visible.push_back(static_cast<int>(e));
  EventStructure hidden = project(*out.pb.apex, visible);
  out.inter_hidden.assign(n, -1);
  std::vector<Pol> hpol(hidden.size());
  std::vector<int> hmap(hidden.size(), -1);
  for (int e : visible) {
    int h = hidden.index(out.pb.apex->id(e));
    out.inter_hidden[e] = h;
    hpol[h] = ipol[e];
    hmap[h] = to_gac[e];
  }
  out.strat.inner = make_esp(std::move(hidden), std::move(hpol));
  out.strat.game = gac.esp();
  out.strat.map = std::move(hmap);
  return out;
}

bool plus_maximal(const Esp& s, const IntSet& x) {
  BitSet bx(s.size());
  for (int e : x) bx.set(e);
  for (size_t e = 0; e < s.size(); ++e)
    if (s.pol[e] == Pol::Pos && s.es.enabled(static_cast<int>(e), bx)) return false;
  return true;
}

std::vector<IntSet> plus_maximal_configs(const Esp& s) {
  std::vector<IntSet> out;
  for_each_configuration(s.es, [&](const IntSet& x) {
    if (plus_maximal(s, x)) out.push_back(x);
  });
  return out;
}

bool check_winning(const Strategy& s, const WinPred& win) {
  for (const auto& x : plus_maximal_configs(*s.inner))
    if (!win(s.image(x))) return false;
  return true;
}

std::vector<Strategy> enumerate_carved_strategies(const EspPtr& game,
                                                  bool deterministic_only, size_t limit) {
  const Esp& G = *game;
  IntSet pos, neg;
  for (size_t e = 0; e < G.size(); ++e)
    (G.pol[e] == Pol::Pos ? pos : neg).push_back(static_cast<int>(e));
  if (pos.size() > 12 || neg.size() > 12)
    throw Error("carved-strategy enumeration is for small games only");

  std::vector<Strategy> out;
  std::set<std::string> seen;
  size_t tried = 0;

  size_t kmax = 1ull << pos.size();
  for (size_t kmask = 0; kmask < kmax; ++kmask) {
    IntSet k;
    for (size_t i = 0; i < pos.size(); ++i)
      if (kmask & (1ull << i)) k.push_back(pos[i]);
    // Wait-set assignment per chosen Player event: odometer over 2^|neg|.
    size_t wdim = k.size();
    std::vector<size_t> wmask(wdim, 0);
    while (true) {
      if (++tried > limit) throw Error("carved-strategy enumeration limit exceeded");
      // build candidate
      EventStructure::Builder bld;
      IntSet events = neg;
      for (int e : k) events.push_back(e);
      std::sort(events.begin(), events.end());
      for (int e : events) bld.event(G.es.id(e));
      for (int e : events)
        for (int j : G.es.covers()[e])
          if (set_contains(events, j)) bld.dep(G.es.id(e), G.es.id(j));
      for (size_t i = 0; i < events.size(); ++i)
        for (size_t j = i + 1; j < events.size(); ++j)
          if (G.es.conflict(events[i], events[j]))
            bld.conflict(G.es.id(events[i]), G.es.id(events[j]));
      for (size_t i = 0; i < wdim; ++i)
        for (size_t b = 0; b < neg.size(); ++b)
          if (wmask[i] & (1ull << b)) bld.dep(G.es.id(neg[b]), G.es.id(k[i]));
      bool ok = true;
      Strategy s;
      try {
        EventStructure es = bld.build();
        std::vector<Pol> pol(es.size());
        std::vector<int> map(es.size());
        for (size_t e = 0; e < es.size(); ++e) {
          int g = G.es.index(es.id(static_cast<int>(e)));
          pol[e] = G.pol[g];
          map[e] = g;
        }
        s.inner = make_esp(std::move(es), std::move(pol));
        s.game = game;
        s.map = std::move(map);
      } catch (const Error&) {
        ok = false;
      }
      if (ok) {
        std::ostringstream key;
        for (size_t i = 0; i < s.inner->size(); ++i) {
          key << s.inner->es.id(static_cast<int>(i)) << ";";
          for (size_t j = 0; j < s.inner->size(); ++j)
            key << (s.inner->es.leq(static_cast<int>(i), static_cast<int>(j)) ? '1' : '0');
        }
        if (seen.insert(key.str()).second) {
          auto rep = check_strategy(s);
          if (rep.is_strategy() && (!deterministic_only || rep.deterministic))
            out.push_back(s);
        }
      }
      // advance odometer
      size_t i = 0;
      for (; i < wdim; ++i) {
        if (++wmask[i] < (1ull << neg.size())) break;
        wmask[i] = 0;
      }
      if (i == wdim) break;
      if (wdim == 0) break;
    }
  }
  return out;
}

bool verify_winning_via_counterstrategies(const Strategy& s, const WinPred& win,
                                          size_t state_cap) {
  EspPtr dual_game = dual_esp(s.game);
  auto counters = enumerate_carved_strategies(dual_game, true);
  for (const auto& tau : counters) {
    auto pb = pullback(s.es_map(), tau.es_map(), state_cap);
    // maximal members of the family
    for (size_t i = 0; i < pb.family.size(); ++i) {
      bool maximal = true;
      for (size_t j = 0; j < pb.family.size() && maximal; ++j) {
        if (i == j || pb.family[j].size() != pb.family[i].size() + 1) continue;
        if (std::includes(pb.family[j].begin(), pb.family[j].end(), pb.family[i].begin(),
                          pb.family[i].end()))
          maximal = false;
      }
      if (!maximal) continue;
      IntSet x;
      for (const auto& [u, v] : pb.family[i]) x.push_back(u);
      std::sort(x.begin(), x.end());
      if (!win(s.image(x))) return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> find_strategy_iso(const Strategy& a, const Strategy& b) {
  if (a.inner->size() != b.inner->size()) return std::nullopt;
  if (a.game->es.ids() != b.game->es.ids()) return std::nullopt;
  const Esp& S = *a.inner;
  const Esp& T = *b.inner;
  size_t n = S.size();
  std::vector<int> f(n, -1);
  std::vector<char> used(n, 0);
  const auto& order = S.es.topo_order();

  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    if (i == n) return true;
    int s = order[i];
    for (size_t t = 0; t < n; ++t) {
      if (used[t]) continue;
      if (b.map[t] != a.map[s]) continue;
      if (T.pol[t] != S.pol[s]) continue;
      bool ok = true;
      for (size_t j = 0; j < i && ok; ++j) {
        int s2 = order[j];
        int t2 = f[s2];
        if (S.es.leq(s2, s) != T.es.leq(t2, static_cast<int>(t))) ok = false;
        if (S.es.leq(s, s2) != T.es.leq(static_cast<int>(t), t2)) ok = false;
        if (S.es.conflict(s2, s) != T.es.conflict(t2, static_cast<int>(t))) ok = false;
      }
      if (!ok) continue;
      f[s] = static_cast<int>(t);
      used[t] = 1;
      if (rec(i + 1)) return true;
      used[t] = 0;
      f[s] = -1;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return f;
}

bool scott_leq(const Esp& game, const IntSet& y, const IntSet& x) {
  // y ⊑ x iff y⁻ ⊇ x⁻ and y⁺ ⊆ x⁺.
  for (int e : x)
    if (game.pol[e] == Pol::Neg && !set_contains(y, e)) return false;
  for (int e : y)
    if (game.pol[e] == Pol::Pos && !set_contains(x, e)) return false;
  return true;
}

bool scott_leq_witness(const Esp& game, const IntSet& y, const IntSet& x, IntSet* z) {
  // Existential form: some configuration z with y ⊇⁻ z ⊆⁺ x.
  bool found = false;
  for_each_configuration(game.es, [&](const IntSet& cand) {
    if (found) return;
    if (!set_subset(cand, y) || !set_subset(cand, x)) return;
    for (int e : set_minus(y, cand))
      if (game.pol[e] != Pol::Neg) return;
    for (int e : set_minus(x, cand))
      if (game.pol[e] != Pol::Pos) return;
    found = true;
    if (z) *z = cand;
  });
  return found;
}

}  // namespace esg
