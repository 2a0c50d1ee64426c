#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "posmod/canonical.hpp"
#include "posmod/corpus.hpp"
#include "posmod/model_finder.hpp"
#include "posmod/parallel.hpp"
#include "posmod/universe.hpp"

using namespace posmod;
using corpus::CycleVariant;

namespace {

void check_against_oracle(const Theory& t, int n) {
  auto found = find_models(t, n);
  auto expected = oracle::digraph_models(t, n);
  CAPTURE(t.name());
  CAPTURE(n);
  REQUIRE(found.size() == expected.size());
  for (const auto& e : expected) {
    int matches = 0;
    for (const auto& f : found) matches += oracle::isomorphic(e, f);
    CHECK(matches == 1);
  }
  for (const auto& f : found) CHECK(oracle::models(f, t));
}

}  // namespace

TEST_CASE("model finder matches generate-and-filter on small digraph theories") {
  for (const auto& t : {corpus::cycle_theory(CycleVariant::T), corpus::cycle_theory(CycleVariant::TPrime),
                        corpus::cycle_theory(CycleVariant::Tn, 4, 6), corpus::successor_theory()}) {
    for (int n = 1; n <= 4; ++n) check_against_oracle(t, n);
  }
}

TEST_CASE("small counts") {
  Theory t4 = corpus::cycle_theory(CycleVariant::Tn, 4, 6);
  CHECK(find_models(t4, 1).size() == 1);
  CHECK(find_models(t4, 2).size() == 2);
  auto three = find_models(t4, 3);
  bool has_c3 = false;
  for (const auto& m : three) has_c3 = has_c3 || oracle::isomorphic(m, shapes::cycle(3));
  CHECK(has_c3);
}

TEST_CASE("pointed abelian groups") {
  Theory g = corpus::group_theory();
  std::vector<std::size_t> counts;
  for (int n = 1; n <= 6; ++n) counts.push_back(find_models(g, n).size());
  // (Z2,1); (Z3,1); (Z4,1) (Z4,2) (Z2xZ2,.); (Z5,1); (Z6,1) (Z6,2) (Z6,3)
  CHECK(counts == std::vector<std::size_t>{0, 1, 1, 3, 1, 3});
  auto four = find_models(g, 4);
  for (const auto& s : {corpus::cyclic_group(2, 2, 1), corpus::cyclic_group(2, 2, 2),
                        corpus::abelian_group({2, 2}, {0, 1})}) {
    int matches = 0;
    for (const auto& m : four) matches += oracle::isomorphic(m, s);
    CHECK(matches == 1);
  }
}

TEST_CASE("budget exhaustion is an error, never a truncation") {
  Theory t6 = corpus::cycle_theory(CycleVariant::Tn, 6, 8);
  CHECK_THROWS_AS(find_models(t6, 8, {10}), BudgetExceeded);
  FinderStats stats;
  auto all = find_models(t6, 5, {}, &stats);
  CHECK(all.size() == 27);
  CHECK(find_models(t6, 5, {stats.decisions}).size() == 27);
}

TEST_CASE("model universe invariants") {
  Theory t4 = corpus::cycle_theory(CycleVariant::Tn, 4, 5);
  ModelUniverse u = enumerate_models(t4, 5);
  CHECK(u.size() == 1 + 2 + 5 + 11 + 26);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(u.index_of(u[i]) == i);
    std::vector<Element> perm(static_cast<std::size_t>(u[i].size()));
    std::iota(perm.rbegin(), perm.rend(), 0);
    CHECK(u.index_of(relabel(u[i], perm)) == i);
    if (i > 0) CHECK(u[i - 1].size() <= u[i].size());
  }
  CHECK_FALSE(u.index_of(shapes::cycle(4)).has_value());
  CHECK_FALSE(u.index_of(shapes::points(6)).has_value());
  CHECK_THROWS_AS(enumerate_models(t4, 0), std::invalid_argument);
  CHECK_THROWS_AS(ModelUniverse(t4, 4, {shapes::cycle(4)}), std::invalid_argument);
  FiniteStructure fwd = shapes::chain(2);
  FiniteStructure back(shapes::digraph_signature(), 2, {{{1, 0}}}, {});
  const FiniteStructure& relabeled = labeled_code(fwd) == canonical_labeling(fwd).code ? back : fwd;
  CHECK_THROWS_AS(ModelUniverse(t4, 4, {relabeled}), std::invalid_argument);
}

TEST_CASE("parallel enumeration is deterministic") {
  Theory t6 = corpus::cycle_theory(CycleVariant::Tn, 6, 7);
  set_parallelism(1);
  ModelUniverse a = enumerate_models(t6, 7);
  set_parallelism(4);
  ModelUniverse b = enumerate_models(t6, 7);
  set_parallelism(1);
  CHECK(a.members() == b.members());
}

TEST_CASE("universe persistence round trip") {
  Theory t = corpus::cycle_theory(CycleVariant::TPrime);
  ModelUniverse u = enumerate_models(t, 4);
  u.set_flag(ModelUniverse::Flag::Pc, 0, false);
  auto dir = std::filesystem::temp_directory_path() / "posmod_universe_test";
  std::filesystem::remove_all(dir);
  save_universe(u, dir);
  auto back = load_universe(dir, t, 4);
  REQUIRE(back.has_value());
  CHECK(back->members() == u.members());
  CHECK(back->flag(ModelUniverse::Flag::Pc, 0) == std::optional<bool>(false));
  CHECK_FALSE(back->flag(ModelUniverse::Flag::Pc, 1).has_value());
  CHECK_FALSE(load_universe(dir, t, 5).has_value());
  CHECK_FALSE(load_universe(dir, corpus::cycle_theory(CycleVariant::T), 4).has_value());
  {
    std::ofstream out(dir / "m0000.pms");
    out << "(structure (universe 1) (rel S (0 0)))";
  }
  CHECK_THROWS_AS(load_universe(dir, t, 4), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("corpus generators") {
  CHECK(corpus::cycle_theory(CycleVariant::T).axioms().size() == 2);
  auto t6 = corpus::cycle_theory(CycleVariant::Tn, 6, 8);
  REQUIRE(t6.axioms().size() == 5);
  CHECK(t6.axioms()[3].label == "collapse-7");
  CHECK(t6.axioms()[4].label == "collapse-8");
  CHECK(corpus::cycle_theory_text(CycleVariant::Tn, 6, 8).rfind(";", 0) == 0);
  CHECK_THROWS_AS(corpus::cycle_theory(CycleVariant::Tn, 3, 5), std::invalid_argument);
  CHECK_THROWS_AS(corpus::cyclic_group(4, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(corpus::cyclic_group(3, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(corpus::cyclic_group(3, 1, 3), std::invalid_argument);
  auto z3 = corpus::cyclic_group(3, 1, 1);
  CHECK(z3.size() == 3);
  CHECK(z3.tuple_count() == 9);
  CHECK(oracle::models(z3, corpus::group_theory()));
  for (const auto& [name, s] : corpus::cycle_samples()) {
    CAPTURE(name);
    CHECK(oracle::models(s, corpus::cycle_theory(CycleVariant::T)));
    CHECK(parse_structure(serialize(s), s.signature()) == s);
  }
  Theory succ = corpus::successor_theory();
  CHECK(to_string(succ.axioms()[2].sentence) == "(not (exists (x) (F x x)))");
  CHECK(oracle::models(corpus::functional_cycle(2), succ));
  CHECK_FALSE(oracle::models(FiniteStructure(succ.signature(), 1, {{{0, 0}}}, {}), succ));
}
