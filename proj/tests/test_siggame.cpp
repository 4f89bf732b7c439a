#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "esg/siggame.hpp"

using namespace esg;

namespace {

Signature one_sort() { return Signature({"s"}, {{"edge", {"s", "s"}}}); }

StructPtr mk_struct(std::vector<std::string> elems, std::vector<Tuple> edges) {
  return std::make_shared<Structure>(
      one_sort(), std::map<std::string, std::vector<std::string>>{{"s", std::move(elems)}},
      std::map<std::string, std::vector<Tuple>>{{"edge", std::move(edges)}});
}

// A one-sided game: Player variable alpha then Player variable beta in a chain.
SigGamePtr chain_game() {
  EventStructure::Builder b;
  b.event("a1").event("b2").dep("a1", "b2");
  auto esp = make_esp(b.build(), {Pol::Pos, Pol::Pos});
  std::vector<SigLabel> vc(2);
  vc[esp->es.index("a1")] = {true, "alpha", "s"};
  vc[esp->es.index("b2")] = {true, "beta", "s"};
  return make_siggame(esp, vc, one_sort(),
                      f_rel("edge", {Term::var("alpha"), Term::var("beta")}));
}

SigGamePtr single_player_var() {
  EventStructure::Builder b;
  b.event("m");
  auto esp = make_esp(b.build(), {Pol::Pos});
  return make_siggame(esp, {{true, "alpha", "s"}}, one_sort(), f_true());
}

SigGamePtr single_opponent_var() {
  EventStructure::Builder b;
  b.event("m");
  auto esp = make_esp(b.build(), {Pol::Neg});
  return make_siggame(esp, {{true, "alpha", "s"}}, one_sort(), f_true());
}

}  // namespace

TEST_CASE("signature game invariants are enforced") {
  // concurrent events with the same label
  EventStructure::Builder b;
  b.event("x").event("y");
  auto esp = make_esp(b.build(), {Pol::Pos, Pol::Pos});
  CHECK_THROWS_AS(
      make_siggame(esp, {{true, "alpha", "s"}, {true, "alpha", "s"}}, one_sort(), f_true()),
      Error);
  // same label at both polarities
  auto esp2 = make_esp(
      [] {
        EventStructure::Builder bb;
        bb.event("x").event("y");
        bb.conflict("x", "y");
        return bb.build();
      }(),
      {Pol::Pos, Pol::Neg});
  CHECK_THROWS_AS(
      make_siggame(esp2, {{true, "alpha", "s"}, {true, "alpha", "s"}}, one_sort(), f_true()),
      Error);
}

TEST_CASE("last moves: one per label, later occurrences win") {
  auto g = chain_game();
  auto A = mk_struct({"a"}, {});
  Instantiation inst{g->esp, g, {0, 1}, {{"s", "a"}, {"s", "a"}}, A};
  IntSet full{0, 1};
  CHECK(last_moves(inst, full) == full);  // different labels: both last
}

TEST_CASE("sigma commutes with last (Prop last) on a corpus instantiation") {
  auto g = chain_game();
  auto A = mk_struct({"a", "b"}, {});
  // S with a repeated beta answer: game needs a chain; reuse game as S here.
  Instantiation inst{g->esp, g, {0, 1}, {{"s", "a"}, {"s", "b"}}, A};
  auto ev = inst.eval();
  for_each_configuration(g->esp->es, [&](const IntSet& x) {
    IntSet ls = last_events(ev, x);
    // sigma is the identity here, so sigma(last) = last(sigma x) must hold
    // verbatim; with identity sigma this checks the definition is stable.
    IntSet img;
    for (int e : ls) img.push_back(inst.sigma[e]);
    std::sort(img.begin(), img.end());
    IntSet xg;
    for (int e : x) xg.push_back(inst.sigma[e]);
    std::sort(xg.begin(), xg.end());
    Instantiation id_inst{g->esp, g, inst.sigma, inst.rho, A};
    CHECK(img == last_events(id_inst.eval(), xg));
  });
}

TEST_CASE("expansion of a single Player variable over a 2-element structure") {
  auto g = single_player_var();
  auto A = mk_struct({"a", "b"}, {});
  Expansion e = expand(g, A, all_var_moves(*g));
  CHECK(e.esp->size() == 2);
  CHECK(e.esp->es.conflict(0, 1));
  CHECK(e.esp->pol[0] == Pol::Pos);
}

TEST_CASE("expansion over a one-element structure is the game itself") {
  auto g = chain_game();
  auto A = mk_struct({"a"}, {});
  Expansion e = expand(g, A, all_var_moves(*g));
  CHECK(e.esp->size() == g->size());
  for (size_t i = 0; i < e.esp->size(); ++i)
    for (size_t j = 0; j < e.esp->size(); ++j) {
      CHECK(e.esp->es.leq(i, j) == g->esp->es.leq(e.eps[i], e.eps[j]));
      CHECK(e.esp->es.conflict(i, j) == g->esp->es.conflict(e.eps[i], e.eps[j]));
    }
}

TEST_CASE("expansion count of the 2-chain over a 2-element structure is 6") {
  auto g = chain_game();
  auto A = mk_struct({"a", "b"}, {});
  Expansion e = expand(g, A, all_var_moves(*g));
  CHECK(e.esp->size() == 6);  // 2 alpha instances + 4 (alpha,beta) pairs
}

TEST_CASE("expansion cap fails loudly with the required size") {
  auto g = chain_game();
  auto A = mk_struct({"a", "b", "c"}, {});
  try {
    expand(g, A, all_var_moves(*g), 5);
    CHECK(false);
  } catch (const Error& err) {
    std::string msg = err.what();
    CHECK(msg.find("12") != std::string::npos);  // 3 + 9 events needed
  }
}

TEST_CASE("epsilon of an expansion is open") {
  auto g = chain_game();
  auto A = mk_struct({"a", "b"}, {});
  Expansion e = expand(g, A, all_var_moves(*g));
  ESMap eps;
  eps.src = es_of(e.esp);
  eps.dst = es_of(g->esp);
  eps.map = e.eps;
  auto cls = classify_map(eps);
  CHECK(cls.open);
}

TEST_CASE("universal map: triangles commute and the image is x[rho]") {
  auto g = chain_game();
  auto A = mk_struct({"a", "b"}, {});
  Expansion e = expand(g, A, all_var_moves(*g));
  Instantiation inst{g->esp, g, {0, 1}, {{"s", "b"}, {"s", "a"}}, A};
  auto s0 = universal_map(inst, e);
  for (size_t s = 0; s < 2; ++s) {
    CHECK(e.eps[s0[s]] == inst.sigma[s]);         // epsilon . s0 = sigma
    CHECK(e.value(s0[s]) == inst.rho[s]);          // rho_GA . s0 = rho
  }
  // uniqueness: any other event choice breaks one of the triangles
  for (size_t s = 0; s < 2; ++s)
    for (size_t e2 = 0; e2 < e.esp->size(); ++e2) {
      if (static_cast<int>(e2) == s0[s]) continue;
      bool commutes = e.eps[e2] == inst.sigma[s] && e.value(static_cast<int>(e2)) == inst.rho[s];
      // events with equal eps and value differ in their valuation history;
      // for this S the history is forced, so no alternative commutes
      if (commutes) {
        // must then differ on a predecessor's valuation
        CHECK(e.gamma[e2] != e.gamma[s0[s]]);
      }
    }
}

TEST_CASE("rigid/open transfer between sigma and sigma0") {
  auto g = chain_game();
  auto A = mk_struct({"a", "b"}, {});
  Expansion e = expand(g, A, all_var_moves(*g));
  // S = prefix of the game (only alpha), valued
  EventStructure::Builder b;
  b.event("a1");
  auto s = make_esp(b.build(), {Pol::Pos});
  Instantiation inst{s, g, {g->esp->es.index("a1")}, {{"s", "a"}}, A};
  auto s0v = universal_map(inst, e);
  ESMap sig = inst.strategy().es_map();
  ESMap sig0;
  sig0.src = es_of(s);
  sig0.dst = es_of(e.esp);
  sig0.map = s0v;
  auto c1 = classify_map(sig);
  auto c0 = classify_map(sig0);
  CHECK(c1.rigid == c0.rigid);
  CHECK(c1.open == c0.open);
}

TEST_CASE("expansion preserves dual: expn((G,A)^perp) = expn(G,A)^perp") {
  auto g = chain_game();
  auto A = mk_struct({"a", "b"}, {});
  Expansion e = expand(g, A, all_var_moves(*g));
  Expansion ed = expand(dual_siggame(g), A, all_var_moves(*g));
  REQUIRE(e.esp->size() == ed.esp->size());
  for (size_t i = 0; i < e.esp->size(); ++i) {
    CHECK(e.esp->es.id(static_cast<int>(i)) == ed.esp->es.id(static_cast<int>(i)));
    CHECK(ed.esp->pol[i] == flip(e.esp->pol[i]));
    for (size_t j = 0; j < e.esp->size(); ++j) {
      CHECK(e.esp->es.leq(i, j) == ed.esp->es.leq(i, j));
      CHECK(e.esp->es.conflict(i, j) == ed.esp->es.conflict(i, j));
    }
  }
}

TEST_CASE("expansion preserves parallel composition up to the evident bijection") {
  auto g = single_player_var();
  auto h = chain_game();
  auto A = mk_struct({"a", "b"}, {});
  auto B = mk_struct({"u"}, {});
  ParallelSigGame gh = parallel_siggame(g, h);
  auto AB = std::make_shared<Structure>(sum(*A, *B));
  Expansion both = expand(gh.game, AB, all_var_moves(*gh.game));
  Expansion eg = expand(g, A, all_var_moves(*g));
  Expansion eh = expand(h, B, all_var_moves(*h));
  REQUIRE(both.esp->size() == eg.esp->size() + eh.esp->size());
  // bijection by (component, base event, untagged valuation)
  for (size_t i = 0; i < both.esp->size(); ++i) {
    int ge = both.eps[i];
    int comp = gh.par.component[ge];
    int orig = gh.par.orig[ge];
    std::map<int, Elem> val;
    for (const auto& [m, v] : both.gamma[i])
      val[gh.par.orig[m]] = Elem{v.sort.substr(2), v.id};
    const Expansion& side = comp == 0 ? eg : eh;
    CHECK(side.find_event(orig, val) >= 0);
  }
}

TEST_CASE("copycat instantiation is a deterministic strategy over the structure") {
  auto g = single_opponent_var();
  auto A = mk_struct({"a", "b"}, {});
  RedStrategy cc = red_copycat(g, A);
  auto rep = check_strategy_over_structure(cc.inst);
  CHECK(rep.is_strategy());
  CHECK(rep.deterministic);
  CHECK(rep.checkers_agree);
  CHECK(rep.winning);
}

TEST_CASE("missing Opponent value breaks receptivity with a witness") {
  auto g = single_opponent_var();
  auto A = mk_struct({"a", "b"}, {});
  // S answers only value a for the Opponent variable.
  EventStructure::Builder b;
  b.event("m");
  auto s = make_esp(b.build(), {Pol::Neg});
  Instantiation inst{s, g, {0}, {{"s", "a"}}, A};
  auto rep = check_strategy_over_structure(inst);
  CHECK_FALSE(rep.via_expansion.receptive);
  CHECK_FALSE(rep.explicit_receptive);
  CHECK(rep.checkers_agree);
}

TEST_CASE("checkers agree across small instantiation corpus") {
  auto g = single_opponent_var();
  auto A = mk_struct({"a", "b"}, {});
  // full receptive S: one event per value, in conflict
  EventStructure::Builder b;
  b.event("ma").event("mb").conflict("ma", "mb");
  auto s = make_esp(b.build(), {Pol::Neg, Pol::Neg});
  Instantiation good{s, g, {0, 0}, {{"s", "a"}, {"s", "b"}}, A};
  auto rep = check_strategy_over_structure(good);
  CHECK(rep.is_strategy());
  CHECK(rep.checkers_agree);
  CHECK(rep.deterministic);
}

TEST_CASE("compose_red with copycat is the identity up to iso") {
  // G and H one-sided (Player variables); the left copy dualizes to
  // Opponent assignments.
  auto g = single_player_var();
  auto h = single_player_var();
  auto A = mk_struct({"a", "b"}, {});
  auto B = mk_struct({"u", "v"}, {});
  // sigma: answers every opponent value with u.
  ParallelSigGame hom = hom_siggame(g, h);
  EventStructure::Builder b;
  b.event("xa").event("xb").event("ya").event("yb");
  b.conflict("xa", "xb");
  b.dep("xa", "ya").dep("xb", "yb");
  auto s = make_esp(b.build(), {Pol::Neg, Pol::Neg, Pol::Pos, Pol::Pos});
  int lm = hom.game->esp->es.index("l.m");
  int rm = hom.game->esp->es.index("r.m");
  std::vector<int> sigma(4);
  sigma[s->es.index("xa")] = lm;
  sigma[s->es.index("xb")] = lm;
  sigma[s->es.index("ya")] = rm;
  sigma[s->es.index("yb")] = rm;
  std::vector<Elem> rho(4);
  rho[s->es.index("xa")] = {"l.s", "a"};
  rho[s->es.index("xb")] = {"l.s", "b"};
  rho[s->es.index("ya")] = {"r.s", "u"};
  rho[s->es.index("yb")] = {"r.s", "u"};
  RedStrategy sg = make_red(g, A, h, B, s, sigma, rho);
  RedStrategy cch = red_copycat(h, B);
  RedStrategy comp = compose_red(sg, cch);
  auto iso = find_red_iso(comp, sg);
  CHECK(iso.has_value());

  RedStrategy ccg = red_copycat(g, A);
  RedStrategy comp2 = compose_red(ccg, sg);
  auto iso2 = find_red_iso(comp2, sg);
  CHECK(iso2.has_value());
}

TEST_CASE("composition with the empty game unit juxtaposes") {
  auto g = single_opponent_var();
  auto A = mk_struct({"a"}, {});
  // empty game and empty-sorted structure
  EventStructure::Builder b;
  auto empty_esp = make_esp(b.build(), {});
  auto eg = make_siggame(empty_esp, {}, Signature({}, {}), f_false());
  auto eA = std::make_shared<Structure>(Signature({}, {}),
                                        std::map<std::string, std::vector<std::string>>{},
                                        std::map<std::string, std::vector<Tuple>>{});
  // strategy (empty,empty) -> (G,A): receptive S over G's single opp var
  ParallelSigGame hom = hom_siggame(eg, g);
  EventStructure::Builder sb;
  sb.event("m");
  auto s = make_esp(sb.build(), {Pol::Neg});
  Instantiation inst{s, hom.game, {hom.game->esp->es.index("r.m")}, {{"r.s", "a"}},
                     std::make_shared<Structure>(sum(*eA, *A))};
  RedStrategy sg;
  sg.G = eg;
  sg.H = g;
  sg.A = eA;
  sg.B = A;
  sg.hom = hom;
  sg.inst = inst;
  validate_instantiation(sg.inst);
  CHECK(red_winning(sg));  // W: false -> true-ish: wins since G side never wins
}
