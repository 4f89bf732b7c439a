#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "esg/freelogic.hpp"
#include "esg/siggame.hpp"

using namespace esg;

namespace {

// Game: Opponent constant ch, Player variables u (then) w; W arbitrary per test.
struct Fixture {
  SigGamePtr G;
  StructPtr A;
  Instantiation inst;  // S = a chosen sub-esp with values

  Fixture(std::vector<Tuple> edges = {{"a", "b"}}) {
    EventStructure::Builder b;
    b.event("ch").event("u").event("w").dep("u", "w");
    EventStructure es = b.build();
    std::vector<Pol> pol(3);
    pol[es.index("ch")] = Pol::Neg;
    pol[es.index("u")] = Pol::Pos;
    pol[es.index("w")] = Pol::Pos;
    auto esp = make_esp(std::move(es), std::move(pol));
    Signature sig({"s"}, {{"edge", {"s", "s"}}});
    std::vector<SigLabel> vc(3);
    vc[esp->es.index("ch")] = {false, "c", ""};
    vc[esp->es.index("u")] = {true, "u", "s"};
    vc[esp->es.index("w")] = {true, "w", "s"};
    G = make_siggame(esp, vc, sig, f_true());
    A = std::make_shared<Structure>(sig, std::map<std::string, std::vector<std::string>>{{"s", {"a", "b"}}},
                                    std::map<std::string, std::vector<Tuple>>{{"edge", edges}});
    inst.S = G->esp;
    inst.G = G;
    inst.sigma = {0, 1, 2};
    for (size_t i = 0; i < 3; ++i) inst.sigma[i] = static_cast<int>(i);
    inst.rho.resize(3);
    inst.rho[esp->es.index("u")] = {"s", "a"};
    inst.rho[esp->es.index("w")] = {"s", "b"};
    inst.A = A;
  }

  IntSet conf(std::vector<std::string> ids) const {
    IntSet x;
    for (auto& i : ids) x.push_back(G->esp->es.index(i));
    std::sort(x.begin(), x.end());
    return x;
  }
};

}  // namespace

TEST_CASE("variable denotation and E at a single-move configuration") {
  Fixture fx;
  auto ev = fx.inst.eval();
  Formula e_u = f_epred(Term::var("u"));
  CHECK(satisfies(fx.conf({"u"}), e_u, ev));
  CHECK_FALSE(satisfies(fx.conf({}), e_u, ev));
  CHECK(satisfies(fx.conf({"u"}), f_eq(Term::var("u"), Term::of_elem({"s", "a"})), ev));
}

TEST_CASE("element terms exist only when some last move carries them") {
  Fixture fx;
  auto ev = fx.inst.eval();
  Formula e_a = f_epred(Term::of_elem({"s", "a"}));
  Formula e_b = f_epred(Term::of_elem({"s", "b"}));
  CHECK(satisfies(fx.conf({"u"}), e_a, ev));
  CHECK_FALSE(satisfies(fx.conf({"u"}), e_b, ev));
  // w updates nothing about a; both a and b are carried by last moves of u,w
  CHECK(satisfies(fx.conf({"u", "w"}), e_b, ev));
  CHECK(satisfies(fx.conf({"u", "w"}), e_a, ev));
}

TEST_CASE("chained same-variable moves: only the later one counts") {
  // S: two moves of the same variable in a chain, values a then b.
  EventStructure::Builder b;
  b.event("u1").event("u2").dep("u1", "u2");
  auto es = b.build();
  auto esp = make_esp(es, {Pol::Pos, Pol::Pos});
  Signature sig({"s"}, {});
  // Game: single variable alpha, played twice => game has a 2-chain of alpha.
  std::vector<SigLabel> vc = {{true, "alpha", "s"}, {true, "alpha", "s"}};
  auto G = make_siggame(esp, vc, sig, f_true());
  auto A = std::make_shared<Structure>(
      sig, std::map<std::string, std::vector<std::string>>{{"s", {"a", "b"}}},
      std::map<std::string, std::vector<Tuple>>{});
  Instantiation inst{esp, G, {0, 1}, {{"s", "a"}, {"s", "b"}}, A};
  auto ev = inst.eval();
  IntSet both{0, 1};
  CHECK(last_events(ev, both) == IntSet{1});
  CHECK(satisfies(both, f_eq(Term::var("alpha"), Term::of_elem({"s", "b"})), ev));
  CHECK_FALSE(satisfies(both, f_eq(Term::var("alpha"), Term::of_elem({"s", "a"})), ev));
}

TEST_CASE("constant existence is masked by later constants of the same polarity") {
  // Game: chain of two Opponent constants c1 <= c2.
  EventStructure::Builder b;
  b.event("c1").event("c2").dep("c1", "c2");
  auto esp = make_esp(b.build(), {Pol::Neg, Pol::Neg});
  Signature sig({"s"}, {});
  auto G = make_siggame(esp, {{false, "c1", ""}, {false, "c2", ""}}, sig, f_true());
  auto A = std::make_shared<Structure>(
      sig, std::map<std::string, std::vector<std::string>>{{"s", {"a"}}},
      std::map<std::string, std::vector<Tuple>>{});
  Instantiation inst{esp, G, {0, 1}, {{}, {}}, A};
  auto ev = inst.eval();
  CHECK(satisfies({0}, f_epred(Term::cst("c1")), ev));
  CHECK_FALSE(satisfies({0, 1}, f_epred(Term::cst("c1")), ev));
  CHECK(satisfies({0, 1}, f_epred(Term::cst("c2")), ev));
}

TEST_CASE("relation atoms need denoting terms of the right sorts") {
  Fixture fx(std::vector<Tuple>{{"a", "b"}});
  auto ev = fx.inst.eval();
  Formula edge = f_rel("edge", {Term::var("u"), Term::var("w")});
  CHECK(satisfies(fx.conf({"u", "w"}), edge, ev));
  CHECK_FALSE(satisfies(fx.conf({"u"}), edge, ev));  // w does not denote yet
  Fixture fx2(std::vector<Tuple>{{"b", "a"}});
  CHECK_FALSE(satisfies(fx2.conf({"u", "w"}), edge, fx2.inst.eval()));
}

TEST_CASE("prec and eqprec follow game order and latest values") {
  Fixture fx;
  auto ev = fx.inst.eval();
  // u <_G w: so (prec u w) holds once w is the last of its label with u below.
  CHECK(satisfies(fx.conf({"u", "w"}), f_prec(Term::var("u"), Term::var("w")), ev));
  CHECK_FALSE(satisfies(fx.conf({"u"}), f_prec(Term::var("u"), Term::var("w")), ev));
  // values differ, so eqprec fails
  CHECK_FALSE(
      satisfies(fx.conf({"u", "w"}), f_eqprec(Term::var("u"), Term::var("w")), ev));
  // give w the same value as u
  Fixture fx2;
  fx2.inst.rho[fx2.G->esp->es.index("w")] = {"s", "a"};
  CHECK(satisfies(fx2.conf({"u", "w"}), f_eqprec(Term::var("u"), Term::var("w")),
                  fx2.inst.eval()));
}

TEST_CASE("empty big conjunction holds everywhere, empty disjunction nowhere") {
  Fixture fx;
  auto ev = fx.inst.eval();
  CHECK(satisfies(fx.conf({}), f_true(), ev));
  CHECK_FALSE(satisfies(fx.conf({}), f_false(), ev));
}

TEST_CASE("exists quantifies over existent elements only (hand oracle)") {
  Fixture fx;
  auto ev = fx.inst.eval();
  Formula some_s = f_exists("z", "s", f_eq(Term::var("z"), Term::var("u")));
  // At {u}: a exists and equals u.
  CHECK(satisfies(fx.conf({"u"}), some_s, ev));
  // At {}: nothing exists.
  CHECK_FALSE(satisfies(fx.conf({}), f_exists("z", "s", f_true()), ev));
  // Hand oracle over all elements and configurations.
  for (auto ids : std::vector<std::vector<std::string>>{{}, {"u"}, {"u", "w"}}) {
    IntSet x = fx.conf(ids);
    bool direct = satisfies(x, f_exists("z", "s", f_epred(Term::var("z"))), ev);
    bool oracle = false;
    for (const auto& a : fx.A->carrier("s"))
      if (satisfies(x, f_epred(Term::of_elem({"s", a})), ev)) oracle = true;
    CHECK(direct == oracle);
  }
}

TEST_CASE("forall is the dual of exists") {
  Fixture fx;
  auto ev = fx.inst.eval();
  Formula all_eq_u = f_forall("z", "s", f_eq(Term::var("z"), Term::var("u")));
  CHECK(satisfies(fx.conf({"u"}), all_eq_u, ev));        // only a exists
  CHECK_FALSE(satisfies(fx.conf({"u", "w"}), all_eq_u, ev));  // b exists too
}

TEST_CASE("formula sizes") {
  Formula e = f_epred(Term::cst("c"));
  CHECK(formula_size(e) == 1);
  Formula phi = f_and({e, e});
  CHECK(formula_size(phi) == formula_size(e) + 1);
  // Indexed conjunction of three atomic implications has size 3.
  Formula impl = f_implies(f_epred(Term::cst("c")), f_rel("edge", {Term::var("u"), Term::var("w")}));
  Formula w = f_and({impl, impl, impl});
  CHECK(formula_size(w) == 3);
}

TEST_CASE("formula round-trip through the text format") {
  TermResolver res = [](const std::string& tok) -> std::optional<Term> {
    if (tok == "u" || tok == "w") return Term::var(tok);
    return Term::cst(tok);
  };
  std::string text =
      "(and (implies (E c) (rel edge u w)) (or (not (eq u w)) (eqprec u w)) "
      "(exists z:s (eqr z @s:a)) (prec c u))";
  Formula f = parse_formula(text, res);
  std::string printed = print_formula(f);
  Formula again = parse_formula(printed, res);
  CHECK(print_formula(again) == printed);
}

TEST_CASE("truth invariance under maps of instantiations") {
  // f : S -> S' between two instantiations of the same game; satisfaction
  // must transfer along f (Prop truthInvariance).
  Fixture fx;
  // S' = S; f = identity is the degenerate case. A sub-esp inclusion:
  // S0 = {ch, u}, f the inclusion into S.
  EventStructure::Builder b;
  b.event("ch").event("u");
  auto es0 = b.build();
  std::vector<Pol> pol0 = {Pol::Neg, Pol::Pos};
  pol0[es0.index("ch")] = Pol::Neg;
  pol0[es0.index("u")] = Pol::Pos;
  auto s0 = make_esp(es0, pol0);
  Instantiation i0;
  i0.S = s0;
  i0.G = fx.G;
  i0.sigma = {fx.G->esp->es.index("ch"), fx.G->esp->es.index("u")};
  i0.rho.resize(2);
  i0.rho[s0->es.index("u")] = {"s", "a"};
  i0.A = fx.A;

  std::vector<Formula> pool = {
      f_epred(Term::var("u")),
      f_epred(Term::cst("c")),
      f_eq(Term::var("u"), Term::of_elem({"s", "a"})),
      f_exists("z", "s", f_epred(Term::var("z"))),
      f_not(f_epred(Term::var("w"))),
      f_prec(Term::cst("c"), Term::var("u")),
  };
  // the inclusion map f
  std::vector<int> fmap = {fx.G->esp->es.index("ch"), fx.G->esp->es.index("u")};
  auto ev0 = i0.eval();
  auto ev1 = fx.inst.eval();
  for_each_configuration(s0->es, [&](const IntSet& x) {
    IntSet fx_img;
    for (int e : x) fx_img.push_back(fmap[e]);
    std::sort(fx_img.begin(), fx_img.end());
    for (const auto& phi : pool)
      CHECK(satisfies(x, phi, ev0) == satisfies(fx_img, phi, ev1));
  });
}
