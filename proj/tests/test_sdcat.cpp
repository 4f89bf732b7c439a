#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "esg/gamezoo.hpp"
#include "esg/sdcat.hpp"

using namespace esg;

namespace {

StructPtr mg(std::vector<std::string> v, std::vector<Tuple> red,
             std::vector<Tuple> green) {
  return make_multigraph(std::move(v), std::move(red), std::move(green));
}

SigGamePtr one_player_var() {
  EventStructure::Builder b;
  b.event("m");
  auto esp = make_esp(b.build(), {Pol::Pos});
  return make_siggame(esp, {{true, "alpha", "v"}}, multigraph_signature(), f_true());
}

}  // namespace

TEST_CASE("verify_delta passes for copycat of the multigraph game") {
  DeltaPtr d = multigraph_cc_game();
  auto rep = verify_delta(*d);
  CHECK(rep.strategy);
  CHECK(rep.deterministic);
  CHECK(rep.counit_map);
  CHECK(rep.comult_iso);
  CHECK(rep.counit_law_left);
  CHECK(rep.counit_law_right);
  CHECK(rep.coassoc);
  CHECK(rep.companions_ok);
  CHECK(rep.scott_lemma);
  CHECK(rep.pass());
}

TEST_CASE("delta without Player companions fails the counit check") {
  // D = G⊥∥G itself: no copycat dependencies, so a Player move has no
  // companion below it and the counit is not a map into CC_G.
  auto g = one_player_var();
  ParallelSigGame hom = hom_siggame(g, g);
  std::vector<int> delta(hom.game->esp->size());
  for (size_t e = 0; e < delta.size(); ++e) delta[e] = static_cast<int>(e);
  DeltaPtr d = make_delta(g, hom.game->esp, delta, 0);
  auto rep = verify_delta(*d);
  CHECK(rep.strategy);
  CHECK_FALSE(rep.counit_map);
  CHECK_FALSE(rep.pass());
}

TEST_CASE("verify_delta passes for the depth-2 trace-inclusion pattern") {
  DeltaPtr d = trace_inclusion_game(2, {"t"});
  auto rep = verify_delta(*d, 40, 4000000);
  CHECK(rep.strategy);
  CHECK(rep.deterministic);
  CHECK(rep.counit_map);
  CHECK(rep.comult_iso);
  CHECK(rep.counit_law_left);
  CHECK(rep.counit_law_right);
  CHECK(rep.coassoc);
  CHECK(rep.companions_ok);
  CHECK(rep.scott_lemma);
}

TEST_CASE("partial expansion of the single-variable game") {
  auto g = one_player_var();
  DeltaPtr d = delta_copycat(g);
  auto A = mg({"a", "b"}, {}, {});
  PartialExpansion pe = build_partial_expansion(d, A, A, /*one_sided=*/true);
  // left Opponent variable expanded to two instances; the right Player move
  // carries no value of its own but has one instance per Opponent history
  CHECK(pe.esp()->size() == 4);
  int lefts = 0, rights = 0;
  for (size_t e = 0; e < pe.esp()->size(); ++e) {
    if (pe.side[e] == 0) {
      lefts++;
      CHECK_FALSE(pe.rho(static_cast<int>(e)).id.empty());
    } else {
      rights++;
      CHECK(pe.rho(static_cast<int>(e)).id.empty());
    }
  }
  CHECK(lefts == 2);
  CHECK(rights == 2);
  // copycat links preserved: the right Player move depends on its companion
  for (size_t e = 0; e < pe.esp()->size(); ++e)
    if (pe.side[e] == 1) {
      CHECK(pe.companion[e] >= 0);
      CHECK(pe.esp()->es.leq(pe.companion[e], static_cast<int>(e)));
    }
  // carrier: one element per (move, Opponent history) pair
  CHECK(pe.carrier.size() == 2);
}

TEST_CASE("partial expansion is deterministic with unique positive covers") {
  DeltaPtr d = multigraph_cc_game();
  auto A = mg({"a", "b"}, {{"a", "b"}}, {});
  PartialExpansion pe = build_partial_expansion(d, A, A, true);
  // deterministic
  for (const auto& [x, y] : pe.esp()->es.immediate_conflicts())
    CHECK((pe.esp()->pol[x] == Pol::Neg && pe.esp()->pol[y] == Pol::Neg));
  // Lemma DApb: y -<+ y' and y -<+ y'' with equal pi1-images implies y'=y''
  auto confs = finite_configurations(pe.esp()->es, 30);
  for (const auto& y : confs) {
    std::map<IntSet, std::vector<IntSet>> covers;  // pi1 image -> extensions
    for (const auto& y2 : confs) {
      if (y2.size() != y.size() + 1 || !set_subset(y, y2)) continue;
      IntSet extra = set_minus(y2, y);
      if (pe.esp()->pol[extra[0]] != Pol::Pos) continue;
      IntSet img;
      for (int e : y2) img.push_back(pe.pi1(e));
      std::sort(img.begin(), img.end());
      covers[img].push_back(y2);
    }
    for (const auto& [img, ys] : covers) CHECK(ys.size() == 1);
  }
}

TEST_CASE("partial expansion agrees with the pullback characterisation") {
  auto g = one_player_var();
  DeltaPtr d = delta_copycat(g);
  auto A = mg({"a", "b"}, {}, {});
  PartialExpansion pe = build_partial_expansion(d, A, A, true);
  // pullback of delta along the opponent-expansion projection of G⊥∥G
  Expansion opp = expand(d->hom.game, pe.expn.A, opponent_var_moves(*d->hom.game));
  ESMap eps;
  eps.src = es_of(opp.esp);
  eps.dst = es_of(d->hom.game->esp);
  eps.map = opp.eps;
  ESMap del;
  del.src = es_of(d->D);
  del.dst = es_of(d->hom.game->esp);
  del.map = d->delta;
  Pullback pb = pullback(eps, del);
  CHECK(pb.apex->size() == pe.esp()->size());
  // mediating map from D(A) commutes and is unique (universal property)
  ESMap to_opp;
  to_opp.src = es_of(pe.esp());
  to_opp.dst = es_of(opp.esp);
  to_opp.map.resize(pe.esp()->size());
  for (size_t e = 0; e < pe.esp()->size(); ++e) {
    std::map<int, Elem> val;
    for (const auto& [m, v] : pe.expn.gamma[e]) val[m] = v;
    // the opponent expansion of the hom game indexes valuations by hom moves
    std::map<int, Elem> hom_val;
    for (const auto& [m, v] : val) hom_val[d->delta[m]] = v;
    to_opp.map[e] = opp.find_event(d->delta[pe.expn.eps[e]], hom_val);
    REQUIRE(to_opp.map[e] >= 0);
  }
  ESMap to_d;
  to_d.src = es_of(pe.esp());
  to_d.dst = es_of(d->D);
  to_d.map = pe.expn.eps;
  auto meds = mediating_maps(pb, to_opp, to_d);
  CHECK(meds.size() == 1);
}

TEST_CASE("sd_identity of copycat delta is the copycat strategy") {
  DeltaPtr d = multigraph_cc_game();
  auto B = mg({"a"}, {{"a", "a"}}, {});
  SDIdentity id = sd_identity(d, B);
  CHECK(id.winning);
  CHECK(id.strat.open);
  RedStrategy cc = red_copycat(d->G, B);
  CHECK(find_red_iso(id.strat.red, cc).has_value());
}

TEST_CASE("sd_membership: identity factors openly; eager strategies fail for trace pattern") {
  DeltaPtr d = multigraph_cc_game();
  auto B = mg({"a", "b"}, {{"a", "b"}}, {});
  RedStrategy cc = red_copycat(d->G, B);
  SDStrategy s;
  std::string w;
  CHECK(sd_membership(d, cc, &s, &w) == SDMembership::Yes);
  CHECK(s.open);

  DeltaPtr tr = trace_inclusion_game(1, {"t"});
  auto L = make_lts({"s0"}, "s0", {});
  RedStrategy cc2 = red_copycat(tr->G, L);
  SDStrategy s2;
  auto verdict = sd_membership(tr, cc2, &s2, &w);
  CHECK(verdict == SDMembership::NoFactorisation);
}

TEST_CASE("two-sided decompose/recompose round-trips on the identity") {
  DeltaPtr d = multigraph_cc_game();
  auto B = mg({"a", "b"}, {{"a", "b"}}, {});
  SDIdentity id = sd_identity(d, B);
  TwoSided ts = two_sided_decompose(id.strat);
  // one-sided: k is empty everywhere
  for (const auto& e : ts.k) CHECK(e.id.empty());
  std::string w;
  auto back = two_sided_recompose(d, B, B, ts.dab, ts.k, ts.h, &w);
  REQUIRE(back.has_value());
  CHECK(back->open);
  CHECK(find_red_iso(back->red, id.strat.red).has_value());
}

TEST_CASE("recompose rejects losing valuations with a witness") {
  DeltaPtr d = multigraph_cc_game();
  auto A = mg({"a", "b"}, {{"a", "b"}}, {});
  auto B = mg({"u", "w"}, {}, {});  // no red edge: constant maps lose
  PartialExpansion dab = build_partial_expansion(d, A, B, false);
  std::vector<Elem> k(dab.esp()->size()), h(dab.esp()->size());
  for (int e : dab.carrier) h[e] = Elem{"v", "u"};
  std::string w;
  auto res = two_sided_recompose(d, A, B, dab, k, h, &w);
  CHECK_FALSE(res.has_value());
  CHECK(!w.empty());
}

TEST_CASE("SD composition: identity laws and openness") {
  DeltaPtr d = multigraph_cc_game();
  auto A = mg({"a", "b"}, {{"a", "b"}}, {});
  SDIdentity idA = sd_identity(d, A);
  REQUIRE(idA.winning);
  SDStrategy comp = sd_compose(idA.strat, idA.strat);
  CHECK(comp.open);
  CHECK(find_red_iso(comp.red, idA.strat.red).has_value());
}

TEST_CASE("span of the identity strategy and recovery equations") {
  DeltaPtr d = multigraph_cc_game();
  auto B = mg({"a", "b"}, {{"a", "b"}}, {});
  SDIdentity id = sd_identity(d, B);
  GSpan span = span_of_strategy(id.strat);
  CHECK(span_winning(span));
  TwoSided ts = two_sided_decompose(id.strat);
  // recovery: h(s) = rho_{G,B} . r_B(s) on V2+ moves, k likewise (empty here)
  for (size_t ve = 0; ve < span.vertex->size(); ++ve) {
    int e = ts.dab.esp()->es.index(span.vertex->es.id(static_cast<int>(ve)));
    if (ts.dab.side[e] == 1 && !ts.h[e].id.empty())
      CHECK(span.expB.value(span.legB[ve]) == ts.h[e]);
    if (ts.dab.side[e] == 0 && !ts.k[e].id.empty())
      CHECK(span.expA.value(span.legA[ve]) == ts.k[e]);
  }
}

TEST_CASE("span composition agrees with SD composition up to iso") {
  DeltaPtr d = multigraph_cc_game();
  auto A = mg({"a", "b"}, {{"a", "b"}}, {});
  auto B = mg({"u", "w"}, {{"u", "w"}}, {});
  auto C = mg({"z"}, {{"z", "z"}}, {});
  // strategies from homomorphisms found by search
  SDSearchResult s1 = find_winning_sd(d, A, B);
  SDSearchResult s2 = find_winning_sd(d, B, C);
  REQUIRE(s1.found);
  REQUIRE(s2.found);
  PartialExpansion dab = build_partial_expansion(d, A, B, false);
  PartialExpansion dbc = build_partial_expansion(d, B, C, false);
  auto st1 = two_sided_recompose(d, A, B, dab, s1.k, s1.h);
  auto st2 = two_sided_recompose(d, B, C, dbc, s2.k, s2.h);
  REQUIRE(st1.has_value());
  REQUIRE(st2.has_value());
  GSpan sp1 = span_of_strategy(*st1);
  GSpan sp2 = span_of_strategy(*st2);
  GSpan composed_spans = compose_spans(sp1, sp2);
  SDStrategy composed = sd_compose(*st1, *st2);
  GSpan span_of_composed = span_of_strategy(composed);
  CHECK(spans_isomorphic(composed_spans, span_of_composed));
}
