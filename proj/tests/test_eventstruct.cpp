#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "esg/eventstruct.hpp"

using namespace esg;

namespace {

EsPtr make(const std::vector<std::string>& events,
           const std::vector<std::pair<std::string, std::string>>& deps,
           const std::vector<std::pair<std::string, std::string>>& confs) {
  EventStructure::Builder b;
  for (const auto& e : events) b.event(e);
  for (const auto& [x, y] : deps) b.dep(x, y);
  for (const auto& [x, y] : confs) b.conflict(x, y);
  return std::make_shared<EventStructure>(b.build());
}

// Independent oracle: filter all 2^n subsets by down-closure and consistency.
std::set<IntSet> config_oracle(const EventStructure& es) {
  std::set<IntSet> out;
  size_t n = es.size();
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    IntSet x;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) x.push_back(static_cast<int>(i));
    if (es.is_configuration(x)) out.insert(x);
  }
  return out;
}

ESMap mk_map(EsPtr src, EsPtr dst, const std::map<std::string, std::string>& m) {
  ESMap f;
  f.src = src;
  f.dst = dst;
  f.map.assign(src->size(), -1);
  for (const auto& [a, b] : m) f.map[src->index(a)] = dst->index(b);
  return f;
}

}  // namespace

TEST_CASE("configurations of tiny structures") {
  auto single = make({"e"}, {}, {});
  CHECK(finite_configurations(*single).size() == 2);

  auto anti = make({"a", "b"}, {}, {});
  CHECK(finite_configurations(*anti).size() == 4);
}

TEST_CASE("five-event structure matches brute force over all 32 subsets") {
  // Two top events over two bottom events, plus a far-right event in
  // immediate conflict with the bottom-middle one.
  auto es = make({"t1", "t2", "b1", "b2", "r"},
                 {{"b1", "t1"}, {"b2", "t1"}, {"b2", "t2"}}, {{"b2", "r"}});
  // Inherited conflicts.
  CHECK(es->conflict(es->index("r"), es->index("t1")));
  CHECK(es->conflict(es->index("r"), es->index("t2")));
  CHECK(es->concurrent(es->index("r"), es->index("b1")));

  auto got = finite_configurations(*es);
  auto oracle = config_oracle(*es);
  CHECK(got.size() == oracle.size());
  for (const auto& x : got) CHECK(oracle.count(x) == 1);
}

TEST_CASE("conflict inheritance and self-conflict rejection") {
  CHECK_THROWS_AS(make({"a", "b"}, {{"a", "b"}}, {{"a", "b"}}), Error);
  // a#b with both below c would make c self-conflicting.
  CHECK_THROWS_AS(make({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}, {{"a", "b"}}), Error);
  CHECK_THROWS_AS(make({"a", "b"}, {{"a", "b"}, {"b", "a"}}, {}), Error);
}

TEST_CASE("identity map classifies as open") {
  auto es = make({"a", "b", "c"}, {{"a", "b"}}, {{"b", "c"}});
  auto c = classify_map(identity_map(es));
  CHECK(c.is_map);
  CHECK(c.total);
  CHECK(c.rigid);
  CHECK(c.open);
}

TEST_CASE("prefix inclusion into a chain is rigid but not open") {
  auto one = make({"a"}, {}, {});
  auto chain = make({"a", "b"}, {{"a", "b"}}, {});
  auto f = mk_map(one, chain, {{"a", "a"}});
  auto c = classify_map(f);
  CHECK(c.is_map);
  CHECK(c.rigid);
  CHECK_FALSE(c.open);
  // Oracle agreement (Prop 1 / Prop 2 unrolled over configurations).
  CHECK(rigid_config_oracle(f));
  CHECK_FALSE(open_config_oracle(f));
}

TEST_CASE("classification agrees with configuration oracles on a map corpus") {
  auto a = make({"a", "b", "c"}, {{"a", "b"}}, {{"b", "c"}});
  auto b = make({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}}, {});
  auto c3 = make({"p", "q"}, {}, {{"p", "q"}});
  std::vector<ESMap> corpus;
  corpus.push_back(identity_map(a));
  corpus.push_back(identity_map(b));
  corpus.push_back(mk_map(a, b, {{"a", "x"}, {"b", "y"}, {"c", "y"}}));
  corpus.push_back(mk_map(a, b, {{"a", "x"}, {"b", "z"}, {"c", "y"}}));
  corpus.push_back(mk_map(c3, a, {{"p", "b"}, {"q", "c"}}));
  corpus.push_back(mk_map(a, a, {{"a", "a"}}));
  for (const auto& f : corpus) {
    std::string w;
    bool fast = is_es_map(f, &w);
    bool slow = is_es_map_config_oracle(f);
    CHECK(fast == slow);
    if (fast && f.total()) {
      auto cls = classify_map(f);
      bool unique_z = false;
      bool rigid = rigid_config_oracle(f, 20, &unique_z);
      CHECK(cls.rigid == rigid);
      if (rigid) CHECK(unique_z);  // Prop 1: the lift z is unique
      CHECK(cls.open == open_config_oracle(f));
    }
  }
}

TEST_CASE("maps reflect causal dependency locally") {
  auto a = make({"a", "b"}, {}, {});                 // concurrent pair
  auto b = make({"x", "y"}, {{"x", "y"}}, {});       // chain
  // a |-> x, b |-> y maps the antichain onto a chain: every configuration
  // containing both must order them, so this is not a map.
  auto f = mk_map(a, b, {{"a", "x"}, {"b", "y"}});
  CHECK_FALSE(is_es_map_config_oracle(f));
  CHECK_FALSE(is_es_map(f));
}

TEST_CASE("projection basics") {
  auto chain = make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, {});
  IntSet all{0, 1, 2};
  auto whole = project(*chain, all);
  CHECK(whole.size() == 3);
  CHECK(whole.leq(whole.index("a"), whole.index("c")));

  IntSet ac{chain->index("a"), chain->index("c")};
  auto e = project(*chain, ac);
  CHECK(e.size() == 2);
  CHECK(e.leq(e.index("a"), e.index("c")));
}

TEST_CASE("defined-part factorisation reproduces the map") {
  auto a = make({"a", "b", "c"}, {{"a", "b"}}, {{"b", "c"}});
  auto b = make({"x", "y"}, {{"x", "y"}}, {});
  std::vector<ESMap> corpus;
  corpus.push_back(mk_map(a, b, {{"a", "x"}, {"b", "y"}}));          // partial
  corpus.push_back(mk_map(a, b, {{"c", "x"}}));                      // partial
  corpus.push_back(mk_map(a, b, {{"a", "x"}, {"b", "y"}, {"c", "y"}}));
  for (const auto& f : corpus) {
    auto [f0, f1] = factorize(f);
    ESMap back = compose(f1, f0);
    CHECK(back.map == f.map);
    CHECK(f1.total());
  }
}

TEST_CASE("pullback of identity with identity is isomorphic to B") {
  auto b = make({"x", "y", "z"}, {{"x", "y"}}, {{"y", "z"}});
  auto pb = pullback(identity_map(b), identity_map(b));
  CHECK(pb.apex->size() == b->size());
  // p1 is a bijection preserving order and conflict both ways.
  for (size_t i = 0; i < pb.apex->size(); ++i)
    for (size_t j = 0; j < pb.apex->size(); ++j) {
      CHECK(pb.apex->leq(i, j) == b->leq(pb.p1.map[i], pb.p1.map[j]));
      CHECK(pb.apex->conflict(i, j) == b->conflict(pb.p1.map[i], pb.p1.map[j]));
      CHECK(pb.p1.map[i] == pb.p2.map[i]);
    }
}

TEST_CASE("pullback of disjoint injections is empty") {
  auto one1 = make({"a"}, {}, {});
  auto one2 = make({"b"}, {}, {});
  auto anti = make({"x", "y"}, {}, {});
  auto f = mk_map(one1, anti, {{"a", "x"}});
  auto g = mk_map(one2, anti, {{"b", "y"}});
  auto pb = pullback(f, g);
  CHECK(pb.apex->size() == 0);
}

TEST_CASE("collapsed 2-chains: secured bijections match matching oracle") {
  auto chain1 = make({"s1", "s2"}, {{"s1", "s2"}}, {});
  auto chain2 = make({"t1", "t2"}, {{"t1", "t2"}}, {});
  auto point = make({"b"}, {}, {});
  auto f = mk_map(chain1, point, {{"s1", "b"}, {"s2", "b"}});
  auto g = mk_map(chain2, point, {{"t1", "b"}, {"t2", "b"}});
  auto pb = pullback(f, g);

  // Oracle: enumerate all pair-sets that are bijective matchings between
  // configurations with equal image, and keep the cycle-free ones.
  int oracle = 0;
  std::vector<std::vector<std::pair<int, int>>> cands;
  std::vector<std::pair<int, int>> all_pairs;
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) all_pairs.emplace_back(s, t);
  for (uint32_t mask = 0; mask < 16; ++mask) {
    std::vector<std::pair<int, int>> ps;
    for (int k = 0; k < 4; ++k)
      if (mask & (1u << k)) ps.push_back(all_pairs[k]);
    IntSet lefts, rights;
    bool func = true;
    for (auto& [s, t] : ps) {
      for (auto& [s2, t2] : ps) {
        if (s == s2 && t != t2) func = false;
        if (t == t2 && s != s2) func = false;
      }
      lefts = set_insert(lefts, s);
      rights = set_insert(rights, t);
    }
    if (!func) continue;
    if (lefts.size() != ps.size() || rights.size() != ps.size()) continue;
    if (!chain1->is_configuration(lefts) || !chain2->is_configuration(rights)) continue;
    // securedness: cycle check on the generated relation
    size_t n = ps.size();
    std::vector<std::vector<char>> edge(n, std::vector<char>(n, 0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (i != j &&
            (chain1->leq(ps[i].first, ps[j].first) || chain2->leq(ps[i].second, ps[j].second)))
          edge[i][j] = 1;
    // Floyd-Warshall style closure, then look for a 2-cycle.
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          if (edge[i][k] && edge[k][j]) edge[i][j] = 1;
    bool cyclic = false;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (i != j && edge[i][j] && edge[j][i]) cyclic = true;
    if (!cyclic) ++oracle;
  }
  CHECK(static_cast<int>(pb.family.size()) == oracle);
  // The order of finite configurations is isomorphic to the rigid family.
  CHECK(finite_configurations(*pb.apex).size() == pb.family.size());
}

TEST_CASE("pullback universal property on a small cone") {
  auto s = make({"s1", "s2"}, {{"s1", "s2"}}, {});
  auto t = make({"t1", "t2"}, {{"t1", "t2"}}, {});
  auto b = make({"b1", "b2"}, {{"b1", "b2"}}, {});
  auto f = mk_map(s, b, {{"s1", "b1"}, {"s2", "b2"}});
  auto g = mk_map(t, b, {{"t1", "b1"}, {"t2", "b2"}});
  auto pb = pullback(f, g);

  auto z = make({"z"}, {}, {});
  auto zf = mk_map(z, s, {{"z", "s1"}});
  auto zg = mk_map(z, t, {{"z", "t1"}});
  auto meds = mediating_maps(pb, zf, zg);
  CHECK(meds.size() == 1);
}

TEST_CASE("configuration isomorphism C(Pr(R)) for a branching pullback") {
  auto s = make({"s1", "s2"}, {}, {{"s1", "s2"}});
  auto t = make({"t"}, {}, {});
  auto b = make({"b"}, {}, {});
  auto f = mk_map(s, b, {{"s1", "b"}, {"s2", "b"}});
  auto g = mk_map(t, b, {{"t", "b"}});
  auto pb = pullback(f, g);
  CHECK(pb.apex->size() == 2);  // two conflicting syncs
  CHECK(pb.apex->conflict(0, 1));
  CHECK(finite_configurations(*pb.apex).size() == pb.family.size());
}

TEST_CASE("configuration cap fails loudly") {
  EventStructure::Builder bb;
  for (int i = 0; i < 25; ++i) bb.event("e" + std::to_string(i));
  auto es = bb.build();
  CHECK_THROWS_AS(finite_configurations(es, 20), Error);
}
