#include "esg/gamezoo.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace esg {

Signature multigraph_signature() {
  return Signature({"v"}, {{"red", {"v", "v"}}, {"green", {"v", "v"}}});
}

StructPtr make_multigraph(std::vector<std::string> verts, std::vector<Tuple> red,
                          std::vector<Tuple> green) {
  return std::make_shared<Structure>(
      multigraph_signature(),
      std::map<std::string, std::vector<std::string>>{{"v", std::move(verts)}},
      std::map<std::string, std::vector<Tuple>>{{"red", std::move(red)},
                                                {"green", std::move(green)}});
}

SigGamePtr multigraph_game() {
  EventStructure::Builder b;
  b.event("a1").event("a2").event("b1").event("b2");
  b.dep("a1", "b1").dep("a2", "b2");
  EventStructure es = b.build();
  std::vector<Pol> pol(4);
  pol[es.index("a1")] = Pol::Neg;
  pol[es.index("a2")] = Pol::Neg;
  pol[es.index("b1")] = Pol::Pos;
  pol[es.index("b2")] = Pol::Pos;
  auto esp = make_esp(std::move(es), std::move(pol));
  std::vector<SigLabel> vc(4);
  vc[esp->es.index("a1")] = {true, "alpha1", "l.v"};
  vc[esp->es.index("a2")] = {true, "alpha2", "l.v"};
  vc[esp->es.index("b1")] = {true, "beta1", "r.v"};
  vc[esp->es.index("b2")] = {true, "beta2", "r.v"};
  Signature sig({"l.v", "r.v"}, {{"l.red", {"l.v", "l.v"}},
                                 {"l.green", {"l.v", "l.v"}},
                                 {"r.red", {"r.v", "r.v"}},
                                 {"r.green", {"r.v", "r.v"}}});
  Term a1 = Term::var("alpha1"), a2 = Term::var("alpha2");
  Term b1 = Term::var("beta1"), b2 = Term::var("beta2");
  Formula w = f_and({f_implies(f_eqrel(a1, a2), f_eqrel(b1, b2)),
                     f_implies(f_rel("l.red", {a1, a2}), f_rel("r.red", {b1, b2})),
                     f_implies(f_rel("l.green", {a1, a2}), f_rel("r.green", {b1, b2}))});
  return make_siggame(esp, vc, sig, w);
}

DeltaPtr multigraph_cc_game() {
  EventStructure::Builder b;
  b.event("ce").event("cr").event("cg").event("b1").event("b2");
  b.conflict("ce", "cr").conflict("ce", "cg").conflict("cr", "cg");
  EventStructure es = b.build();
  std::vector<Pol> pol(5, Pol::Neg);
  pol[es.index("b1")] = Pol::Pos;
  pol[es.index("b2")] = Pol::Pos;
  auto esp = make_esp(std::move(es), std::move(pol));
  std::vector<SigLabel> vc(5);
  vc[esp->es.index("ce")] = {false, "e", ""};
  vc[esp->es.index("cr")] = {false, "r", ""};
  vc[esp->es.index("cg")] = {false, "g", ""};
  vc[esp->es.index("b1")] = {true, "beta1", "v"};
  vc[esp->es.index("b2")] = {true, "beta2", "v"};
  Term b1 = Term::var("beta1"), b2 = Term::var("beta2");
  Formula w =
      f_and({f_implies(f_epred(Term::cst("e")), f_eqrel(b1, b2)),
             f_implies(f_epred(Term::cst("r")), f_rel("red", {b1, b2})),
             f_implies(f_epred(Term::cst("g")), f_rel("green", {b1, b2}))});
  return delta_copycat(make_siggame(esp, vc, multigraph_signature(), w));
}

DeltaPtr kpebble_game(int k, int n, const Signature& sigma) {
  if (k < 1 || n < 1) throw Error("kpebble_game needs k, n >= 1");
  if (sigma.sorts().size() != 1) throw Error("kpebble_game is one-sorted");
  const std::string sort = sigma.sorts()[0];
  EventStructure::Builder b;
  std::vector<SigLabel> labels;
  std::vector<std::pair<std::string, SigLabel>> events;
  std::vector<Pol> pols;
  std::vector<std::string> seqs{""};
  // assignment tree: nonempty pebble sequences of length <= n
  std::vector<std::string> frontier{""};
  std::vector<std::string> all;
  for (int depth = 1; depth <= n; ++depth) {
    std::vector<std::string> next;
    for (const auto& p : frontier)
      for (int j = 1; j <= k; ++j) {
        std::string id = p + std::to_string(j);
        all.push_back(id);
        next.push_back(id);
      }
    frontier = next;
  }
  for (const auto& s : all) {
    b.event("q" + s);
    if (s.size() > 1) b.dep("q" + s.substr(0, s.size() - 1), "q" + s);
  }
  // sibling conflicts
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& s : all) children[s.substr(0, s.size() - 1)].push_back(s);
  for (const auto& [p, cs] : children)
    for (size_t i = 0; i < cs.size(); ++i)
      for (size_t j = i + 1; j < cs.size(); ++j) b.conflict("q" + cs[i], "q" + cs[j]);

  // challenges: one constant per well-sorted relation instance over pebbles,
  // plus equality challenges; all pairwise conflicting
  std::vector<std::pair<std::string, Formula>> challenges;
  auto peb_term = [&](int j) { return Term::var("x" + std::to_string(j)); };
  for (const auto& [rel, ar] : sigma.relations()) {
    std::vector<int> idx(ar.size(), 1);
    while (true) {
      std::string cid = "c." + rel;
      std::vector<Term> ts;
      for (int j : idx) {
        cid += "." + std::to_string(j);
        ts.push_back(peb_term(j));
      }
      challenges.push_back({cid, f_implies(f_epred(Term::cst(cid)), f_rel(rel, ts))});
      size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] <= k) break;
        idx[i] = 1;
      }
      if (i == idx.size()) break;
    }
  }
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      std::string cid = "ceq." + std::to_string(i) + "." + std::to_string(j);
      challenges.push_back(
          {cid, f_implies(f_epred(Term::cst(cid)), f_eqrel(peb_term(i), peb_term(j)))});
    }
  for (const auto& [cid, f] : challenges) b.event(cid);
  for (size_t i = 0; i < challenges.size(); ++i)
    for (size_t j = i + 1; j < challenges.size(); ++j)
      b.conflict(challenges[i].first, challenges[j].first);

  EventStructure es = b.build();
  std::vector<Pol> pol(es.size());
  std::vector<SigLabel> vc(es.size());
  for (const auto& s : all) {
    int e = es.index("q" + s);
    pol[e] = Pol::Pos;
    vc[e] = {true, "x" + std::string(1, s.back()), sort};
  }
  for (const auto& [cid, f] : challenges) {
    int e = es.index(cid);
    pol[e] = Pol::Neg;
    vc[e] = {false, cid, ""};
  }
  std::vector<Formula> conjuncts;
  for (const auto& [cid, f] : challenges) conjuncts.push_back(f);
  auto g = make_siggame(make_esp(std::move(es), std::move(pol)), vc, sigma,
                        f_and(conjuncts));
  return delta_copycat(g, n);
}

Signature lts_signature(const std::vector<std::string>& actions) {
  std::map<std::string, std::vector<std::string>> rels{{"Start", {"st"}}};
  for (const auto& a : actions) rels[a] = {"st", "st"};
  return Signature({"st"}, rels);
}

StructPtr make_lts(const std::vector<std::string>& states, const std::string& start,
                   const std::vector<std::pair<std::string, Tuple>>& transitions) {
  std::map<std::string, std::vector<Tuple>> interp{{"Start", {{start}}}};
  for (const auto& [act, t] : transitions) interp[act].push_back(t);
  std::vector<std::string> actions;
  for (const auto& [act, t] : transitions) actions.push_back(act);
  std::sort(actions.begin(), actions.end());
  actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
  // signature must list every action of the family; caller supplies via
  // transitions only, so reconstruct from them plus Start.
  std::map<std::string, std::vector<std::string>> rels{{"Start", {"st"}}};
  for (const auto& a : actions) rels[a] = {"st", "st"};
  auto s = std::make_shared<Structure>(
      Signature({"st"}, rels),
      std::map<std::string, std::vector<std::string>>{{"st", states}}, interp);
  check_lts(*s);
  return s;
}

void check_lts(const Structure& a) {
  for (const auto& t : a.tuples("Start"))
    for (const auto& [rel, ar] : a.sig().relations()) {
      if (rel == "Start") continue;
      for (const auto& e : a.tuples(rel))
        if (e.size() == 2 && e[1] == t[0])
          throw Error("start state " + t[0] + " has an incoming transition");
    }
}

namespace {

struct SimGameBuilder {
  int n;
  std::vector<std::string> actions;
  EventStructure::Builder b;
  std::vector<std::pair<std::string, SigLabel>> labelled;  // id -> label
  std::vector<std::pair<std::string, Pol>> pols;

  std::string var_name(int round) { return round % 2 == 1 ? "b1" : "b2"; }

  void node(const std::string& path, const std::string& parent_event, int round) {
    std::string ve = "v." + path;
    b.event(ve);
    b.dep(parent_event, ve);
    labelled.push_back({ve, {true, var_name(round), "st"}});
    pols.push_back({ve, Pol::Pos});
    if (round == n) return;
    std::vector<std::string> chs;
    for (size_t ai = 0; ai < actions.size(); ++ai) {
      std::string ce = "c." + path + "." + actions[ai];
      b.event(ce);
      b.dep(ve, ce);
      labelled.push_back({ce, {false, "c." + actions[ai], ""}});
      pols.push_back({ce, Pol::Neg});
      chs.push_back(ce);
      node(path + std::to_string(ai), ce, round + 1);
    }
    for (size_t i = 0; i < chs.size(); ++i)
      for (size_t j = i + 1; j < chs.size(); ++j) b.conflict(chs[i], chs[j]);
  }
};

}  // namespace

DeltaPtr simulation_game(int n, const std::vector<std::string>& actions) {
  if (n < 1) throw Error("simulation_game needs n >= 1");
  SimGameBuilder sb{n, actions, {}, {}, {}};
  sb.b.event("st");
  sb.labelled.push_back({"st", {false, "st", ""}});
  sb.pols.push_back({"st", Pol::Neg});
  sb.node("r", "st", 1);
  EventStructure es = sb.b.build();
  std::vector<Pol> pol(es.size());
  std::vector<SigLabel> vc(es.size());
  for (const auto& [id, l] : sb.labelled) vc[es.index(id)] = l;
  for (const auto& [id, p] : sb.pols) pol[es.index(id)] = p;

  Term b1 = Term::var("b1"), b2 = Term::var("b2");
  std::vector<Formula> conj{f_implies(f_epred(Term::cst("st")), f_rel("Start", {b1}))};
  for (const auto& a : actions) {
    conj.push_back(f_implies(f_prec(Term::cst("c." + a), b2), f_rel(a, {b1, b2})));
    conj.push_back(f_implies(f_prec(Term::cst("c." + a), b1), f_rel(a, {b2, b1})));
  }
  auto g = make_siggame(make_esp(std::move(es), std::move(pol)), vc,
                        lts_signature(actions), f_and(conj));
  return delta_copycat(g, n);
}

namespace {

struct TraceGameBuilder {
  int n;
  std::vector<std::string> actions;
  EventStructure::Builder b;
  std::vector<std::pair<std::string, SigLabel>> labelled;
  std::vector<std::pair<std::string, Pol>> pols;
  std::vector<std::string> nodes;                   // paths
  std::map<std::string, std::string> parent;        // path -> parent path

  std::string pvar(int round) { return round % 2 == 1 ? "p1" : "p2"; }
  std::string uvar(int round) { return round % 2 == 1 ? "b1" : "b2"; }

  void node(const std::string& path, const std::string& parent_event, int round,
            const std::string& parent_path) {
    nodes.push_back(path);
    parent[path] = parent_path;
    std::string vp = "vp." + path;
    std::string up = "up." + path;
    std::string sp = "sp." + path;
    b.event(vp).event(up).event(sp);
    b.dep(parent_event, vp);
    b.dep(vp, up);
    b.dep(vp, sp);
    if (path != "r") b.dep("up." + parent_path, up);
    labelled.push_back({vp, {true, pvar(round), "st"}});
    labelled.push_back({up, {true, uvar(round), "st"}});
    labelled.push_back({sp, {false, "stp", ""}});
    pols.push_back({vp, Pol::Pos});
    pols.push_back({up, Pol::Pos});
    pols.push_back({sp, Pol::Pos});
    if (round == n) return;
    std::vector<std::string> branchers{sp};
    for (size_t ai = 0; ai < actions.size(); ++ai) {
      std::string ce = "ch." + path + "." + actions[ai];
      b.event(ce);
      b.dep(vp, ce);
      labelled.push_back({ce, {false, "c." + actions[ai], ""}});
      pols.push_back({ce, Pol::Pos});
      branchers.push_back(ce);
      node(path + std::to_string(ai), ce, round + 1, path);
    }
    for (size_t i = 0; i < branchers.size(); ++i)
      for (size_t j = i + 1; j < branchers.size(); ++j)
        b.conflict(branchers[i], branchers[j]);
  }
};

}  // namespace

DeltaPtr trace_inclusion_game(int n, const std::vector<std::string>& actions) {
  if (n < 1) throw Error("trace_inclusion_game needs n >= 1");
  TraceGameBuilder tb{n, actions, {}, {}, {}, {}, {}};
  tb.b.event("st");
  tb.labelled.push_back({"st", {false, "st", ""}});
  tb.pols.push_back({"st", Pol::Neg});
  tb.node("r", "st", 1, "");
  EventStructure es = tb.b.build();
  std::vector<Pol> pol(es.size());
  std::vector<SigLabel> vc(es.size());
  for (const auto& [id, l] : tb.labelled) vc[es.index(id)] = l;
  for (const auto& [id, p] : tb.pols) pol[es.index(id)] = p;

  Term p1 = Term::var("p1"), p2 = Term::var("p2");
  Term b1 = Term::var("b1"), b2 = Term::var("b2");
  std::vector<Formula> conj{f_implies(f_epred(Term::cst("st")), f_rel("Start", {b1})),
                            f_epred(Term::cst("stp")),
                            f_implies(f_epred(b1), f_eqprec(p1, b1)),
                            f_implies(f_epred(b2), f_eqprec(p2, b2))};
  for (const auto& a : actions) {
    conj.push_back(f_implies(f_prec(Term::cst("c." + a), b2), f_rel(a, {b1, b2})));
    conj.push_back(f_implies(f_prec(Term::cst("c." + a), b1), f_rel(a, {b2, b1})));
  }
  auto g = make_siggame(make_esp(std::move(es), std::move(pol)), vc,
                        lts_signature(actions), f_and(conj));

  // The all-in-one pattern D: a left copy of G, a shared right start
  // challenge, and one right copy of each stopped branch gated by the left
  // stopper of that branch.
  EventStructure::Builder db;
  const EventStructure& ges = g->esp->es;
  for (size_t e = 0; e < ges.size(); ++e) db.event("l." + ges.id(static_cast<int>(e)));
  for (size_t e = 0; e < ges.size(); ++e) {
    for (int j : ges.covers()[e])
      db.dep("l." + ges.id(static_cast<int>(e)), "l." + ges.id(j));
    for (size_t j = e + 1; j < ges.size(); ++j)
      if (ges.conflict(e, j))
        db.conflict("l." + ges.id(static_cast<int>(e)), "l." + ges.id(static_cast<int>(j)));
  }
  db.event("r.st");
  db.dep("r.st", "l.st");  // companion dependency for the Player copy of st
  std::map<std::string, std::vector<std::string>> copy_events;  // stop path -> ids
  for (const auto& p : tb.nodes) {
    // events of the branch stopped at p: chain of ancestors plus stopper
    std::vector<std::string> chain;
    std::string q = p;
    while (!q.empty()) {
      chain.push_back(q);
      q = tb.parent[q];
    }
    std::reverse(chain.begin(), chain.end());
    std::vector<std::string>& evs = copy_events[p];
    auto rid = [&p](const std::string& gid) { return "r@" + p + "." + gid; };
    for (size_t i = 0; i < chain.size(); ++i) {
      const std::string& node = chain[i];
      std::string vp = "vp." + node, up = "up." + node;
      db.event(rid(vp)).event(rid(up));
      evs.push_back(vp);
      evs.push_back(up);
      db.dep(rid(vp), rid(up));
      if (i == 0) {
        db.dep("r.st", rid(vp));
        db.dep("l.sp." + p, rid(vp));  // the single stopper dependency
      } else {
        const std::string& prev = chain[i - 1];
        std::string ce = "ch." + prev + "." + actions[node.back() - '0'];
        db.event(rid(ce));
        evs.push_back(ce);
        db.dep(rid("vp." + prev), rid(ce));
        db.dep(rid(ce), rid(vp));
        db.dep(rid("up." + prev), rid(up));
        db.dep("l." + ce, rid(ce));  // companion dependency
      }
      db.dep("l." + vp, rid(vp));  // companions of the Player copies
      db.dep("l." + up, rid(up));
    }
    std::string sp = "sp." + p;
    db.event(rid(sp));
    evs.push_back(sp);
    db.dep(rid("vp." + p), rid(sp));
    db.dep("l." + sp, rid(sp));
  }
  EventStructure des = db.build();
  std::vector<Pol> dpol(des.size());
  std::vector<int> delta(des.size());
  ParallelSigGame hom = hom_siggame(g, g);
  const EventStructure& hes = hom.game->esp->es;
  for (size_t e = 0; e < des.size(); ++e) {
    std::string id = des.id(static_cast<int>(e));
    std::string gid;
    bool left = false;
    if (id.rfind("l.", 0) == 0) {
      left = true;
      gid = id.substr(2);
    } else if (id.rfind("r.", 0) == 0) {
      gid = id.substr(2);
    } else {
      gid = id.substr(id.find('.') + 1);  // r@<p>.<gid>
    }
    int ge = ges.index(gid);
    dpol[e] = left ? flip(g->esp->pol[ge]) : g->esp->pol[ge];
    delta[e] = hes.index((left ? "l." : "r.") + gid);
  }
  return make_delta(g, make_esp(std::move(des), std::move(dpol)), std::move(delta), n);
}

namespace {

struct EFBuilder {
  int n;
  EventStructure::Builder b;
  std::vector<std::pair<std::string, SigLabel>> labelled;
  std::vector<std::pair<std::string, Pol>> pols;
  std::vector<std::pair<std::string, std::string>> vars;  // (var name, event id), in tree order
  std::vector<std::pair<std::string, std::string>> var_paths;  // (var name, path)

  void node(const std::string& path, const std::string& parent_event, bool dualized,
            int round, const std::string& sort) {
    if (round > n) return;
    Pol opp = dualized ? Pol::Pos : Pol::Neg;
    Pol ply = dualized ? Pol::Neg : Pol::Pos;
    std::string cl = "kl." + path, cr = "kr." + path;
    b.event(cl).event(cr);
    b.conflict(cl, cr);
    if (!parent_event.empty()) {
      b.dep(parent_event, cl);
      b.dep(parent_event, cr);
    }
    labelled.push_back({cl, {false, cl, ""}});
    labelled.push_back({cr, {false, cr, ""}});
    pols.push_back({cl, opp});
    pols.push_back({cr, opp});
    std::string vl = "v." + path + "l", vr = "v." + path + "r";
    b.event(vl).event(vr);
    b.dep(cl, vl);
    b.dep(cr, vr);
    labelled.push_back({vl, {true, "x" + path + "l", sort}});
    labelled.push_back({vr, {true, "x" + path + "r", sort}});
    pols.push_back({vl, ply});
    pols.push_back({vr, opp});
    vars.push_back({"x" + path + "l", vl});
    vars.push_back({"x" + path + "r", vr});
    var_paths.push_back({"x" + path + "l", path + "l"});
    var_paths.push_back({"x" + path + "r", path + "r"});
    node(path + "l", vl, dualized, round + 1, sort);
    node(path + "r", vr, !dualized, round + 1, sort);
  }
};

bool paths_consistent(const std::string& a, const std::string& b) {
  return a.rfind(b, 0) == 0 || b.rfind(a, 0) == 0;
}

}  // namespace

DeltaPtr ef_game(int n, const Signature& sigma) {
  if (n < 0) throw Error("ef_game needs n >= 0");
  if (sigma.sorts().size() != 1) throw Error("ef_game is one-sorted");
  const std::string sort = sigma.sorts()[0];
  EFBuilder eb{n, {}, {}, {}, {}, {}};
  if (n > 0) eb.node("", "", false, 1, sort);

  // challenge component: positive and negative challenges over consistent
  // variable tuples, all pairwise conflicting
  std::vector<std::pair<std::string, Formula>> challenges;
  std::map<std::string, std::string> path_of;
  for (const auto& [v, p] : eb.var_paths) path_of[v] = p;
  std::vector<std::string> vnames;
  for (const auto& [v, e] : eb.vars) vnames.push_back(v);
  auto add_challenge = [&](const std::string& cid, const Formula& atom) {
    challenges.push_back({cid, f_implies(f_epred(Term::cst(cid)), atom)});
    challenges.push_back(
        {"n" + cid, f_implies(f_epred(Term::cst("n" + cid)), f_not(atom))});
  };
  for (const auto& [rel, ar] : sigma.relations()) {
    std::vector<size_t> idx(ar.size(), 0);
    if (vnames.empty()) break;
    while (true) {
      bool consistent = true;
      for (size_t i = 0; i < idx.size() && consistent; ++i)
        for (size_t j = i + 1; j < idx.size() && consistent; ++j)
          if (!paths_consistent(path_of[vnames[idx[i]]], path_of[vnames[idx[j]]]))
            consistent = false;
      if (consistent) {
        std::string cid = "c." + rel;
        std::vector<Term> ts;
        for (size_t i : idx) {
          cid += "." + vnames[i];
          ts.push_back(Term::var(vnames[i]));
        }
        add_challenge(cid, f_rel(rel, ts));
      }
      size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < vnames.size()) break;
        idx[i] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  for (size_t i = 0; i < vnames.size(); ++i)
    for (size_t j = 0; j < vnames.size(); ++j) {
      if (!paths_consistent(path_of[vnames[i]], path_of[vnames[j]])) continue;
      std::string cid = "ceq." + vnames[i] + "." + vnames[j];
      add_challenge(cid, f_eqrel(Term::var(vnames[i]), Term::var(vnames[j])));
    }
  for (const auto& [cid, f] : challenges) eb.b.event(cid);
  for (size_t i = 0; i < challenges.size(); ++i)
    for (size_t j = i + 1; j < challenges.size(); ++j)
      eb.b.conflict(challenges[i].first, challenges[j].first);

  EventStructure es = eb.b.build();
  std::vector<Pol> pol(es.size());
  std::vector<SigLabel> vc(es.size());
  for (const auto& [id, l] : eb.labelled) vc[es.index(id)] = l;
  for (const auto& [id, p] : eb.pols) pol[es.index(id)] = p;
  for (const auto& [cid, f] : challenges) {
    vc[es.index(cid)] = {false, cid, ""};
    pol[es.index(cid)] = Pol::Neg;
  }
  std::vector<Formula> conj;
  for (const auto& [cid, f] : challenges) conj.push_back(f);
  auto g = make_siggame(make_esp(std::move(es), std::move(pol)), vc, sigma, f_and(conj));
  return delta_copycat(g, n);
}

SDSearchResult find_winning_sd(const DeltaPtr& d, const StructPtr& A, const StructPtr& B,
                               size_t cap) {
  PartialExpansion dab = build_partial_expansion(d, A, B, /*one_sided=*/false, cap);
  size_t n = dab.esp()->size();
  // Player variable moves to assign.
  std::vector<int> slots;
  for (size_t e = 0; e < n; ++e)
    if (d->D_sig->vc[dab.expn.eps[e]].is_var && dab.esp()->pol[e] == Pol::Pos)
      slots.push_back(static_cast<int>(e));
  std::vector<std::vector<Elem>> domain(slots.size());
  for (size_t i = 0; i < slots.size(); ++i) {
    const SigLabel& l = d->D_sig->vc[dab.expn.eps[slots[i]]];
    const Structure& s = dab.side[slots[i]] == 0 ? *A : *dab.B;
    for (const auto& id : s.carrier(l.sort.substr(2)))
      domain[i].push_back(Elem{l.sort.substr(2), id});
  }
  std::vector<int> slot_of(n, -1);
  for (size_t i = 0; i < slots.size(); ++i) slot_of[slots[i]] = static_cast<int>(i);

  auto pm = plus_maximal_configs(*dab.esp());
  // For early pruning, a configuration is checkable once all its Player
  // variable moves are assigned; index configurations by their highest slot.
  std::vector<std::vector<size_t>> by_last_slot(slots.size() + 1);
  for (size_t ci = 0; ci < pm.size(); ++ci) {
    int last = -1;
    for (int e : pm[ci])
      if (slot_of[e] >= 0) last = std::max(last, slot_of[e]);
    by_last_slot[last + 1].push_back(ci);
  }

  std::vector<Elem> k(n), h(n);
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    for (size_t ci : by_last_slot[i]) {
      const IntSet& x = pm[ci];
      bool w1 = dab.side_wins(x, 0, A, k);
      bool w2 = dab.side_wins(x, 1, dab.B, h);
      if (w1 && !w2) return false;
    }
    if (i == slots.size()) return true;
    int e = slots[i];
    for (const Elem& v : domain[i]) {
      if (dab.side[e] == 0)
        k[e] = v;
      else
        h[e] = v;
      if (rec(i + 1)) return true;
    }
    if (dab.side[e] == 0)
      k[e] = {};
    else
      h[e] = {};
    return false;
  };
  SDSearchResult out;
  out.found = rec(0);
  if (out.found) {
    out.k = k;
    out.h = h;
  }
  return out;
}

bool oracle_khom_exists(const Structure& A, const Structure& B, int k, int rounds) {
  const auto& ca = A.carrier(A.sig().sorts()[0]);
  const auto& cb = B.carrier(B.sig().sorts()[0]);
  using State = std::vector<std::pair<int, int>>;  // per pebble: (a, b) or (-1,-1)
  std::map<std::pair<int, State>, bool> memo;
  auto hom_ok = [&](const State& st) {
    for (const auto& [rel, ar] : A.sig().relations()) {
      std::vector<size_t> idx(ar.size(), 0);
      if (ar.empty()) continue;
      while (true) {
        bool all = true;
        Tuple ta, tb;
        for (size_t i : idx) {
          if (st[i].first < 0) {
            all = false;
            break;
          }
          ta.push_back(ca[st[i].first]);
          tb.push_back(cb[st[i].second]);
        }
        if (all && A.holds(rel, ta) && !B.holds(rel, tb)) return false;
        size_t i = 0;
        for (; i < idx.size(); ++i) {
          if (++idx[i] < static_cast<size_t>(k)) break;
          idx[i] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (st[i].first >= 0 && st[j].first >= 0 && st[i].first == st[j].first &&
            st[i].second != st[j].second)
          return false;
    return true;
  };
  std::function<bool(int, State)> win = [&](int m, State st) -> bool {
    if (!hom_ok(st)) return false;
    if (m == 0) return true;
    auto key = std::make_pair(m, st);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = true;
    for (int p = 0; p < k && ok; ++p)
      for (size_t a = 0; a < ca.size() && ok; ++a) {
        bool answer = false;
        for (size_t b = 0; b < cb.size() && !answer; ++b) {
          State nx = st;
          nx[p] = {static_cast<int>(a), static_cast<int>(b)};
          if (win(m - 1, nx)) answer = true;
        }
        if (!answer) ok = false;
      }
    memo[key] = ok;
    return ok;
  };
  return win(rounds, State(k, {-1, -1}));
}

bool oracle_simulated(const Structure& A, const std::string& a, const Structure& B,
                      const std::string& b, int transition_rounds) {
  const auto& ca = A.carrier("st");
  const auto& cb = B.carrier("st");
  std::map<std::tuple<int, std::string, std::string>, bool> memo;
  std::function<bool(int, std::string, std::string)> win =
      [&](int m, std::string x, std::string y) -> bool {
    if (m == 0) return true;
    auto key = std::make_tuple(m, x, y);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = true;
    for (const auto& [rel, ar] : A.sig().relations()) {
      if (rel == "Start" || !ok) continue;
      for (const auto& x2 : ca) {
        if (!A.holds(rel, {x, x2})) continue;
        bool answer = false;
        for (const auto& y2 : cb)
          if (B.holds(rel, {y, y2}) && win(m - 1, x2, y2)) answer = true;
        if (!answer) {
          ok = false;
          break;
        }
      }
    }
    memo[key] = ok;
    return ok;
  };
  return win(transition_rounds, a, b);
}

namespace {

void collect_traces(const Structure& s, const std::string& state, int len,
                    const std::vector<std::string>& actions, std::string prefix,
                    std::set<std::string>& out) {
  out.insert(prefix);
  if (len == 0) return;
  for (const auto& act : actions)
    for (const auto& t : s.tuples(act))
      if (t[0] == state)
        collect_traces(s, t[1], len - 1, actions, prefix + act + ";", out);
}

}  // namespace

bool oracle_traces_included(const Structure& A, const std::string& a, const Structure& B,
                            const std::string& b, int max_len,
                            const std::vector<std::string>& actions) {
  std::set<std::string> ta, tb;
  collect_traces(A, a, max_len, actions, "", ta);
  collect_traces(B, b, max_len, actions, "", tb);
  return std::includes(tb.begin(), tb.end(), ta.begin(), ta.end());
}

bool oracle_ef_equivalent(const Structure& A, const Structure& B, int rounds) {
  const std::string sort = A.sig().sorts()[0];
  const auto& ca = A.carrier(sort);
  const auto& cb = B.carrier(sort);
  using Pairs = std::vector<std::pair<int, int>>;
  auto iso_ok = [&](const Pairs& ps) {
    for (const auto& [a1, b1] : ps)
      for (const auto& [a2, b2] : ps)
        if ((a1 == a2) != (b1 == b2)) return false;
    for (const auto& [rel, ar] : A.sig().relations()) {
      std::vector<size_t> idx(ar.size(), 0);
      if (ps.empty() || ar.empty()) continue;
      while (true) {
        Tuple ta, tb;
        for (size_t i : idx) {
          ta.push_back(ca[ps[i].first]);
          tb.push_back(cb[ps[i].second]);
        }
        if (A.holds(rel, ta) != B.holds(rel, tb)) return false;
        size_t i = 0;
        for (; i < idx.size(); ++i) {
          if (++idx[i] < ps.size()) break;
          idx[i] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    return true;
  };
  std::function<bool(int, Pairs)> win = [&](int m, Pairs ps) -> bool {
    if (!iso_ok(ps)) return false;
    if (m == 0) return true;
    for (size_t a = 0; a < ca.size(); ++a) {
      bool answer = false;
      for (size_t b = 0; b < cb.size() && !answer; ++b) {
        Pairs nx = ps;
        nx.push_back({static_cast<int>(a), static_cast<int>(b)});
        if (win(m - 1, nx)) answer = true;
      }
      if (!answer) return false;
    }
    for (size_t b = 0; b < cb.size(); ++b) {
      bool answer = false;
      for (size_t a = 0; a < ca.size() && !answer; ++a) {
        Pairs nx = ps;
        nx.push_back({static_cast<int>(a), static_cast<int>(b)});
        if (win(m - 1, nx)) answer = true;
      }
      if (!answer) return false;
    }
    return true;
  };
  return win(rounds, {});
}

}  // namespace esg
