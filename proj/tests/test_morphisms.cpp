#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "posmod/corpus.hpp"
#include "posmod/morphisms.hpp"
#include "posmod/semantics.hpp"

using namespace posmod;

TEST_CASE("homomorphism counts on the cycle examples") {
  using namespace shapes;
  auto c3c3 = disjoint_sum(cycle(3), cycle(3));
  CHECK(count_homomorphisms(cycle(3), cycle(3)) == 3);
  CHECK(count_homomorphisms(cycle(3), cycle(5)) == 0);
  CHECK(count_homomorphisms(cycle(5), cycle(5)) == 5);
  CHECK(count_homomorphisms(chain(2), cycle(3)) == 3);
  CHECK(count_homomorphisms(c3c3, cycle(3)) == 9);
  CHECK(oracle::homs(c3c3, cycle(3)).size() == 9);
}

TEST_CASE("hom search agrees with exhaustive maps (random digraphs)") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    auto a = oracle::random_digraph(rng, 1 + trial % 4, 0.3);
    auto b = oracle::random_digraph(rng, 1 + (trial / 4) % 5, 0.45);
    auto expected = oracle::homs(a, b);
    auto got = find_homomorphisms(a, b);
    CHECK(got == expected);  // both lexicographic
    CHECK(count_homomorphisms(a, b) == expected.size());
    auto first = first_homomorphism(a, b);
    CHECK(first.has_value() == !expected.empty());
    if (first) CHECK(*first == expected.front());
    for (std::size_t limit : {std::size_t{1}, std::size_t{3}}) {
      auto some = find_homomorphisms(a, b, {}, limit);
      CHECK(some.size() == std::min(limit, expected.size()));
      for (std::size_t i = 0; i < some.size(); ++i) CHECK(some[i] == expected[i]);
    }
  }
}

TEST_CASE("pinned search") {
  auto c3 = shapes::cycle(3);
  std::vector<Element> pins{1, -1, -1};
  auto hs = find_homomorphisms(c3, c3, pins);
  REQUIRE(hs.size() == 1);
  CHECK(hs[0] == ElementMap{1, 2, 0});
  std::vector<Element> bad{0, 0, -1};
  CHECK_THROWS_AS(find_homomorphisms(c3, c3, bad), std::invalid_argument);
}

TEST_CASE("constants are preserved by homomorphisms") {
  auto z2 = corpus::cyclic_group(2, 1, 1);
  auto z4 = corpus::cyclic_group(2, 2, 2);
  auto z4b = corpus::cyclic_group(2, 2, 1);
  CHECK(count_homomorphisms(z2, z4) == 1);   // 1 -> 2
  CHECK(count_homomorphisms(z2, z4b) == 0);  // a = 1 has order 4
  CHECK(oracle::homs(z2, z4).size() == 1);
}

TEST_CASE("embedding checks") {
  auto c3 = shapes::cycle(3);
  auto e = check_embedding(shapes::points(2), shapes::points(1), ElementMap{0, 0});
  CHECK_FALSE(e.holds);
  CHECK(e.violation == "merge 0 1");
  e = check_embedding(shapes::points(2), shapes::chain(2), ElementMap{0, 1});
  CHECK_FALSE(e.holds);
  CHECK(e.violation == "reflect S(0 1)");
  CHECK(check_embedding(shapes::chain(2), c3, ElementMap{0, 1}).holds);
}

TEST_CASE("immersions and distinguishing formulas") {
  using namespace shapes;
  auto c3 = cycle(3);
  auto c3c5 = disjoint_sum(c3, cycle(5));
  auto r = check_immersion(c3, c3c5, ElementMap{0, 1, 2});
  CHECK_FALSE(r.holds);
  REQUIRE(r.formula.has_value());
  CHECK(eval(c3c5, *r.formula, {}));
  CHECK_FALSE(eval(c3, *r.formula, {}));
  CHECK(r.formula->atom_count() == 5);

  auto chain_in_c3 = check_immersion(chain(2), c3, ElementMap{0, 1});
  CHECK_FALSE(chain_in_c3.holds);
  Assignment img;
  Assignment src;
  for (Element e : chain_in_c3.formula_args) {
    img.emplace_back("x" + std::to_string(e), e);
    src.emplace_back("x" + std::to_string(e), e);
  }
  CHECK(eval(c3, *chain_in_c3.formula, img));
  CHECK_FALSE(eval(chain(2), *chain_in_c3.formula, src));

  auto c3c3 = disjoint_sum(c3, c3);
  auto ok = check_immersion(c3, c3c3, ElementMap{0, 1, 2});
  CHECK(ok.holds);
  CHECK(compose(ElementMap{0, 1, 2}, ok.retraction) == identity_map(3));
}

TEST_CASE("retraction verdicts match the type oracle on random pairs") {
  oracle::TypeOracle types(shapes::digraph_signature(), {2, 3, 3, false, true});
  std::mt19937 rng(23);
  int failures = 0;
  for (int trial = 0; trial < 80; ++trial) {
    auto a = oracle::random_digraph(rng, 1 + trial % 3, 0.4);
    auto b = oracle::random_digraph(rng, 2 + trial % 3, 0.5);
    auto ta = types.types(a);
    auto tb = types.types(b);
    for (const auto& f : oracle::homs(a, b)) {
      bool retraction = check_immersion(a, b, f, false).holds;
      bool reflects = types.immersion(a, ta, b, tb, f);
      // a retraction transports every formula back, so it can never be
      // contradicted by a formula
      if (retraction) CHECK(reflects);
      if (!retraction) ++failures;
    }
  }
  CHECK(failures > 0);
}

TEST_CASE("positive types of tuples") {
  auto c3 = shapes::cycle(3);
  auto c5 = shapes::cycle(5);
  std::vector<Element> a{0, 1};
  CHECK(tpqf_leq(c3, a, c5, a));
  CHECK(tpqf_leq(c5, a, c3, a));
  CHECK_FALSE(tp_leq(c3, a, c5, a).holds);
  CHECK(tp_leq(c5, a, c5, std::vector<Element>{2, 3}).holds);
  std::vector<Element> rep{0, 0};
  CHECK_FALSE(tpqf_leq(c3, rep, c3, a));
  CHECK(tpqf_leq(c3, a, c3, a));
  CHECK_THROWS_AS(tp_leq(c3, a, c3, std::vector<Element>{0}), std::invalid_argument);
}

TEST_CASE("pushout pattern solutions are commuting pairs") {
  using namespace shapes;
  auto a = points(2);
  auto b = points(1);
  auto c = chain(2);
  ElementMap f{0, 0};
  ElementMap g{0, 1};
  auto p = pushout_pattern(b, c, f, g, a.size());
  // any target needs S(e,e)
  CHECK(solve_pattern(p.pattern, cycle(3), 1).empty());
  auto loop = FiniteStructure(digraph_signature(), 1, {{{0, 0}}}, {});
  CHECK(solve_pattern(p.pattern, loop, 1).size() == 1);
}
