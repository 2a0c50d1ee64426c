#include <doctest.h>

#include "oracles.hpp"
#include "posmod/analysis.hpp"
#include "posmod/corpus.hpp"
#include "posmod/morphisms.hpp"

using namespace posmod;
using corpus::CycleVariant;

namespace {

// Over finite structures a homomorphism f: A -> B is an immersion exactly
// when some homomorphism g: B -> A has g o f = id (B's positive diagram is
// itself a pp formula).
bool has_left_inverse(const FiniteStructure& a, const FiniteStructure& b, const ElementMap& f) {
  for (const auto& g : oracle::homs(b, a)) {
    bool id = true;
    for (int x = 0; x < a.size() && id; ++x) id = g[f[x]] == x;
    if (id) return true;
  }
  return false;
}

bool oracle_pc(const FiniteStructure& a, const ModelUniverse& u) {
  for (const auto& b : u.members())
    for (const auto& f : oracle::homs(a, b))
      if (!has_left_inverse(a, b, f)) return false;
  return true;
}

bool oracle_embedding(const FiniteStructure& a, const FiniteStructure& b, const ElementMap& f) {
  for (int x = 0; x < a.size(); ++x)
    for (int y = x + 1; y < a.size(); ++y)
      if (f[x] == f[y]) return false;
  bool ok = true;
  oracle::for_each_map(2, a.size(), [&](const ElementMap& t) {
    if (b.holds(0, {f[t[0]], f[t[1]]}) && !a.holds(0, {t[0], t[1]})) ok = false;
  });
  return ok;
}

bool oracle_hmax(const FiniteStructure& a, const ModelUniverse& u) {
  for (const auto& b : u.members())
    for (const auto& f : oracle::homs(a, b))
      if (!oracle_embedding(a, b, f)) return false;
  return true;
}

bool oracle_closes(const FiniteStructure& b, const FiniteStructure& c, const ElementMap& f, const ElementMap& g,
                   const ModelUniverse& u) {
  for (const auto& d : u.members()) {
    auto hb = oracle::homs(b, d);
    auto hc = oracle::homs(c, d);
    for (const auto& x : hb)
      for (const auto& y : hc) {
        bool square = true;
        for (std::size_t e = 0; e < f.size() && square; ++e) square = x[f[e]] == y[g[e]];
        if (square) return true;
      }
  }
  return false;
}

bool oracle_amalgamation(const FiniteStructure& a, const ModelUniverse& u) {
  for (const auto& b : u.members())
    for (const auto& c : u.members())
      for (const auto& f : oracle::homs(a, b))
        for (const auto& g : oracle::homs(a, c))
          if (!oracle_closes(b, c, f, g, u)) return false;
  return true;
}

FiniteStructure structure_in(const std::string& cert, const Signature& sig, std::size_t from = 0) {
  return parse_structure(oracle::extract(cert, "structure", from), sig);
}

}  // namespace

TEST_CASE("pc and h-maximal members agree with brute force") {
  for (const auto& [t, n] : {std::pair{corpus::cycle_theory(CycleVariant::Tn, 4, 5), 5},
                             std::pair{corpus::cycle_theory(CycleVariant::TPrime), 4},
                             std::pair{corpus::cycle_theory(CycleVariant::T), 4}}) {
    ModelUniverse u = enumerate_models(t, n);
    auto pcs = pc_members(u);
    auto hmax = h_maximal_members(u);
    CAPTURE(t.name());
    for (std::size_t i = 0; i < u.size(); ++i) {
      CAPTURE(serialize(u[i]));
      bool pc = std::find(pcs.begin(), pcs.end(), i) != pcs.end();
      bool hm = std::find(hmax.begin(), hmax.end(), i) != hmax.end();
      CHECK(pc == oracle_pc(u[i], u));
      CHECK(hm == oracle_hmax(u[i], u));
      if (pc) CHECK(hm);
    }
  }
}

TEST_CASE("cycle theories: the pc members") {
  ModelUniverse u4 = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6);
  auto pcs = pc_members(u4);
  REQUIRE(pcs.size() == 1);
  CHECK(oracle::isomorphic(u4[pcs[0]], shapes::cycle(3)));

  ModelUniverse u6 = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 6, 7), 7);
  Verdict v = is_pc(shapes::cycle(3), u6);
  CHECK(v.kind == VerdictKind::HoldsWithin);
  CHECK(v.bound == 7);
}

TEST_CASE("pc failures carry a replayable certificate") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 5), 5);
  const Signature& sig = u.theory().signature();
  int checked = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    Verdict v = is_pc(i, u);
    if (v.kind != VerdictKind::Fails) continue;
    ++checked;
    CAPTURE(v.certificate);
    // "into member j (structure ..) hom (map ..) is not an immersion: F ..."
    FiniteStructure target = structure_in(v.certificate, sig);
    CHECK(u.index_of(target).has_value());
    ElementMap f = parse_map(oracle::extract(v.certificate, "map"), u[i].size());
    CHECK(oracle::preserves(u[i], target, f));
    CHECK_FALSE(has_left_inverse(u[i], target, f));
    auto colon = v.certificate.find(": ");
    REQUIRE(colon != std::string::npos);
    std::string text = v.certificate.substr(colon + 2);
    std::string formula = text.substr(0, text.find(" holds"));
    PositiveFormula phi = parse_formula(formula, sig);
    Assignment src;
    Assignment img;
    for (const auto& x : phi.free_variables()) {
      Element e = std::stoi(x.substr(1));
      src.emplace_back(x, e);
      img.emplace_back(x, f[e]);
    }
    CHECK(eval(target, phi, img));
    CHECK_FALSE(eval(u[i], phi, src));
  }
  CHECK(checked > 0);
}

TEST_CASE("h-maximality certificates and the two-point example") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::TPrime), 4);
  Verdict v = is_h_maximal(shapes::points(2), u);
  REQUIRE(v.kind == VerdictKind::Fails);
  CHECK(v.certificate.find("merge 0 1") != std::string::npos);
  FiniteStructure target = structure_in(v.certificate, u.theory().signature());
  ElementMap f = parse_map(oracle::extract(v.certificate, "map"), 2);
  CHECK(oracle::preserves(shapes::points(2), target, f));
  CHECK_FALSE(oracle_embedding(shapes::points(2), target, f));
  CHECK_THROWS_AS(is_h_maximal(shapes::cycle(4), u), NotAModel);
  CHECK_THROWS_AS(is_pc(shapes::cycle(4), u), NotAModel);
}

TEST_CASE("refining the bound only removes pc members") {
  for (const auto& [t, lo, hi] : {std::tuple{corpus::cycle_theory(CycleVariant::Tn, 4, 6), 4, 6},
                                  std::tuple{corpus::cycle_theory(CycleVariant::Tn, 6, 8), 6, 8},
                                  std::tuple{corpus::group_theory(), 5, 8}}) {
    ModelUniverse small = enumerate_models(t, lo);
    ModelUniverse large = enumerate_models(t, hi);
    CAPTURE(t.name());
    for (std::size_t i : pc_members(large)) {
      if (large[i].size() > lo) continue;
      auto j = small.index_of(large[i]);
      REQUIRE(j.has_value());
      CHECK(is_pc(*j, small).positive());
    }
    for (std::size_t i = 0; i < small.size(); ++i) {
      if (is_pc(i, small).kind == VerdictKind::Fails) CHECK(is_pc(small[i], large).kind == VerdictKind::Fails);
    }
  }
}

TEST_CASE("pointed groups: (Z4,2) stops being pc between 5 and 8") {
  Theory g = corpus::group_theory();
  auto z42 = corpus::cyclic_group(2, 2, 2);
  CHECK(is_pc(z42, enumerate_models(g, 5)).kind == VerdictKind::HoldsWithin);
  CHECK(is_pc(z42, enumerate_models(g, 8)).kind == VerdictKind::Fails);
  auto z84 = corpus::cyclic_group(2, 3, 4);
  ElementMap twice{0, 2, 4, 6};
  REQUIRE(oracle::preserves(z42, z84, twice));
  CHECK_FALSE(has_left_inverse(z42, z84, twice));
  CHECK_FALSE(check_immersion(z42, z84, twice).holds);
}

TEST_CASE("amalgamation bases agree with brute force") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::TPrime), 3);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CAPTURE(serialize(u[i]));
    CHECK(is_amalgamation_basis(u[i], u).positive() == oracle_amalgamation(u[i], u));
  }
  ModelUniverse u4 = enumerate_models(corpus::cycle_theory(CycleVariant::TPrime), 4);
  Verdict v = is_amalgamation_basis(shapes::points(2), u4);
  REQUIRE(v.kind == VerdictKind::Fails);
  const Signature& sig = u4.theory().signature();
  auto c_at = v.certificate.find("C = ");
  FiniteStructure b = structure_in(v.certificate, sig);
  FiniteStructure c = structure_in(v.certificate, sig, c_at);
  ElementMap f = parse_map(oracle::extract(v.certificate, "map"), 2);
  ElementMap g = parse_map(oracle::extract(v.certificate, "map", v.certificate.find("g = ")), 2);
  CHECK(oracle::preserves(shapes::points(2), b, f));
  CHECK(oracle::preserves(shapes::points(2), c, g));
  CHECK_FALSE(oracle_closes(b, c, f, g, u4));
}

TEST_CASE("pc members are amalgamation bases") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6);
  for (std::size_t i : pc_members(u)) CHECK(is_amalgamation_basis(u[i], u).positive());
}

TEST_CASE("asymmetric amalgamation") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6);
  auto c3 = shapes::cycle(3);
  auto c3c3 = disjoint_sum(c3, c3);
  ElementMap i{0, 1, 2};
  ElementMap f{1, 2, 0};
  Amalgam am = asymmetric_amalgam(c3, c3c3, c3, i, f, u);
  REQUIRE(am.member.has_value());
  const auto& d = u[*am.member];
  CHECK(oracle::preserves(c3c3, d, am.g));
  CHECK(oracle::preserves(c3, d, am.j));
  CHECK(has_left_inverse(c3, d, am.j));
  for (int x = 0; x < 3; ++x) CHECK(am.g[i[x]] == am.j[f[x]]);
  CHECK_THROWS_AS(asymmetric_amalgam(shapes::chain(2), c3, c3, ElementMap{0, 1}, ElementMap{0, 1}, u),
                  std::invalid_argument);
  CHECK_THROWS_AS(asymmetric_amalgam(c3, c3, c3, ElementMap{0, 0, 0}, f, u), std::invalid_argument);
}

TEST_CASE("completeness") {
  CHECK(is_complete(enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6)).positive());
  ModelUniverse g = enumerate_models(corpus::group_theory(), 5);
  Verdict v = is_complete(g);
  REQUIRE(v.kind == VerdictKind::Fails);
  const Signature& sig = g.theory().signature();
  FiniteStructure b = structure_in(v.certificate, sig);
  FiniteStructure c = structure_in(v.certificate, sig, v.certificate.find(" and "));
  for (const auto& d : g.members()) CHECK((oracle::homs(b, d).empty() || oracle::homs(c, d).empty()));
}

TEST_CASE("ctr statuses agree with direct evaluation") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::T), 4);
  const Signature& sig = u.theory().signature();
  PositiveFormula phi = parse_formula("(S x y)", sig);
  CtrReport r = ctr(u, phi, {2, 1, 2, false, true});
  REQUIRE_FALSE(r.entries.empty());
  CHECK(r.free_vars == std::vector<std::string>{"x", "y"});
  for (const auto& e : r.entries) {
    bool witnessed = false;
    for (const auto& m : u.members())
      oracle::for_each_map(2, m.size(), [&](const ElementMap& t) {
        Assignment asg{{"x", t[0]}, {"y", t[1]}};
        if (eval(m, phi, asg) && eval(m, e.psi, asg)) witnessed = true;
      });
    CAPTURE(to_string(e.psi));
    CHECK(witnessed == (e.status.kind == VerdictKind::Refuted));
    if (e.status.kind == VerdictKind::Refuted) {
      REQUIRE(e.member.has_value());
      Assignment asg{{"x", e.tuple[0]}, {"y", e.tuple[1]}};
      CHECK(eval(u[*e.member], phi, asg));
      CHECK(eval(u[*e.member], e.psi, asg));
    } else {
      CHECK(e.status.bound == 4);
    }
  }
  CHECK_THROWS_AS(ctr(u, parse_formula("(exists (z) (and (S x y) (S y z) (S z w)))", sig), {2, 1, 2, false, true}),
                  std::invalid_argument);
}

TEST_CASE("ctr complement needs disjunction") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6);
  PositiveFormula eq = parse_formula("(= x y)", u.theory().signature());
  CtrReport plain = ctr(u, eq, {3, 3, 3, false, true}, {false, true});
  CHECK(plain.complement_requested);
  CHECK_FALSE(plain.complement.has_value());
  CtrReport with_or = ctr(u, eq, {3, 3, 3, true, true}, {false, true});
  REQUIRE(with_or.complement.has_value());
  // a complement of x = y covers every pair of distinct elements of a pc member
  auto pcs = pc_members(u);
  for (std::size_t i : pcs)
    oracle::for_each_map(2, u[i].size(), [&](const ElementMap& t) {
      Assignment asg{{"x", t[0]}, {"y", t[1]}};
      CHECK(eval(u[i], *with_or.complement, asg) == (t[0] != t[1]));
    });
}

TEST_CASE("h-maximality through ctr sets") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 5), 5);
  auto hmax = h_maximal_members(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Verdict v = hmax_ctr_criterion(u[i], u, {2, 2, 2, false, true});
    bool hm = std::find(hmax.begin(), hmax.end(), i) != hmax.end();
    CAPTURE(serialize(u[i]));
    if (hm) CHECK(v.positive());
    if (!hm) CHECK(v.kind == VerdictKind::Fails);
  }
}

TEST_CASE("robinson property") {
  ModelUniverse u4 = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6);
  Verdict g = check_robinson(u4, 3, RobinsonScope::Global);
  CHECK(g.kind == VerdictKind::HoldsWithin);
  CHECK(g.bound == 6);
  ModelUniverse u6 = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 6, 8), 8);
  Verdict l = check_robinson(u6, 2, RobinsonScope::Local);
  REQUIRE(l.kind == VerdictKind::Fails);
  CHECK(l.certificate.find("a = (0 1), b = (3 4)") != std::string::npos);
  auto c3c5 = disjoint_sum(shapes::cycle(3), shapes::cycle(5));
  std::vector<Element> a{0, 1};
  std::vector<Element> b{3, 4};
  CHECK(tpqf_leq(c3c5, a, c3c5, b));
  CHECK_FALSE(tp_leq(c3c5, a, c3c5, b).holds);
  // the 2-chain is pc here; its endpoints share the empty qf type
  ModelUniverse tiny = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 6, 6), 2);
  Verdict t = check_robinson(tiny, 2, RobinsonScope::Local);
  REQUIRE(t.kind == VerdictKind::Fails);
  CHECK(t.certificate.find("a = (0), b = (1)") != std::string::npos);
}

TEST_CASE("quantifier elimination on the pc members") {
  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6);
  const Signature& sig = u.theory().signature();
  auto q1 = qe_check(u, parse_formula("(exists (y) (S x y))", sig), {});
  REQUIRE(q1.has_value());
  CHECK(to_string(*q1) == "true");
  PositiveFormula two = parse_formula("(exists (z) (and (S x z) (S z y)))", sig);
  auto q2 = qe_check(u, two, {});
  REQUIRE(q2.has_value());
  CHECK(to_string(*q2) == "(S y x)");
  for (std::size_t i : pc_members(u))
    oracle::for_each_map(2, u[i].size(), [&](const ElementMap& t) {
      Assignment asg{{"x", t[0]}, {"y", t[1]}};
      CHECK(eval(u[i], *q2, asg) == eval(u[i], two, asg));
    });
}

TEST_CASE("theories of a structure") {
  auto c3 = shapes::cycle(3);
  FormulaFragment frag{2, 1, 2, false, true};
  auto univ = theory_of(c3, frag, SentenceKind::HUniversal);
  auto ind = theory_of(c3, frag, SentenceKind::HInductive);
  CHECK_FALSE(univ.empty());
  CHECK(ind.size() > univ.size());
  for (const auto& s : univ) {
    CHECK(s.is_h_universal());
    CHECK(oracle::holds(c3, s));
  }
  for (const auto& s : ind) CHECK(oracle::holds(c3, s));
  auto params = theory_of(c3, frag, SentenceKind::HUniversal, true);
  CHECK(params.size() > univ.size());

  const Signature& sig = c3.signature();
  auto loop = parse_sentence("(not (exists (x) (S x x)))", sig);
  auto renamed = parse_sentence("(forall (z) (=> (S z z) false))", sig);
  CHECK(sentence_key(loop, sig) == sentence_key(renamed, sig));

  ModelUniverse u = enumerate_models(corpus::cycle_theory(CycleVariant::Tn, 4, 6), 6);
  SentenceSet hull = kaiser_hull(u, frag);
  SentenceSet comp = universal_companion(u, frag);
  CHECK(hull.verdict.kind == VerdictKind::HoldsWithin);
  CHECK(hull.contains(loop, sig));
  CHECK(comp.contains(loop, sig));
  CHECK_FALSE(hull.contains(parse_sentence("(not (exists (x y) (S x y)))", sig), sig));
  for (const auto& s : comp.sentences) CHECK(s.is_h_universal());
  for (const auto& s : hull.sentences)
    for (std::size_t i : pc_members(u)) CHECK(oracle::holds(u[i], s));
}

TEST_CASE("companions") {
  Theory t4 = corpus::cycle_theory(CycleVariant::Tn, 4, 6);
  CHECK(companion_check(t4, t4, 6).kind == VerdictKind::Holds);
  Verdict v = companion_check(corpus::cycle_theory(CycleVariant::T), corpus::cycle_theory(CycleVariant::TPrime), 4);
  ModelUniverse a = enumerate_models(corpus::cycle_theory(CycleVariant::T), 4);
  ModelUniverse b = enumerate_models(corpus::cycle_theory(CycleVariant::TPrime), 4);
  std::vector<std::string> ka;
  std::vector<std::string> kb;
  for (std::size_t i : pc_members(a)) ka.push_back(serialize(a[i]));
  for (std::size_t i : pc_members(b)) kb.push_back(serialize(b[i]));
  CHECK((ka == kb) == v.positive());
  CHECK_THROWS(companion_check(t4, corpus::group_theory(), 3));
}
