#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posmod/formula.hpp"
#include "posmod/structure.hpp"

namespace posmod {

inline constexpr std::size_t kAllHoms = std::numeric_limits<std::size_t>::max();

/// Source side of a homomorphism search: variables, relation constraints,
/// constants that must land on the target's constants, and fixed images.
struct HomPattern {
  int num_vars = 0;
  std::vector<std::pair<int, std::vector<int>>> constraints;  // (relation, variables)
  std::vector<std::pair<int, std::size_t>> constant_vars;     // (variable, constant)
  std::vector<Element> pins;                                  // -1 = free; empty = none
};

HomPattern pattern_of(const FiniteStructure& a);

/// The pattern of B + C with f(x) and g(x) identified for every x of A; a
/// solution is a pair of maps out of B and C agreeing on A.
struct PushoutPattern {
  HomPattern pattern;
  std::vector<int> b_var;  // variable of each element of B
  std::vector<int> c_var;  // variable of each element of C
};
PushoutPattern pushout_pattern(const FiniteStructure& b, const FiniteStructure& c, std::span<const Element> f,
                               std::span<const Element> g, int a_size);

/// Solutions in lexicographic order of the variable images. With a finite
/// limit the search walks variables in index order and stops early; with
/// kAllHoms it orders variables by decreasing degree and sorts the result.
/// Throws std::invalid_argument when the pins violate a constraint outright.
std::vector<ElementMap> solve_pattern(const HomPattern& p, const FiniteStructure& target, std::size_t limit);

/// Pins map source elements to target elements (-1 or absent = free).
std::vector<ElementMap> find_homomorphisms(const FiniteStructure& a, const FiniteStructure& b,
                                           std::span<const Element> pins = {}, std::size_t limit = kAllHoms);
std::optional<ElementMap> first_homomorphism(const FiniteStructure& a, const FiniteStructure& b,
                                             std::span<const Element> pins = {});
std::size_t count_homomorphisms(const FiniteStructure& a, const FiniteStructure& b);

bool is_homomorphism(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> map);

ElementMap compose(std::span<const Element> first, std::span<const Element> second);  // second after first
ElementMap identity_map(int n);

struct EmbeddingCheck {
  bool holds = true;
  std::string violation;  // "merge 0 1" or "reflect S(1,0)"
};

/// Injective and reflecting every relation atom. Assumes a homomorphism.
EmbeddingCheck check_embedding(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> f);

struct ImmersionCheck {
  bool holds = true;
  ElementMap retraction;  // g: B -> A with g o f = id, when holds
  // When not: a positive formula over the listed source elements, true of
  // their images in B and false of them in A.
  std::optional<PositiveFormula> formula;
  std::vector<Element> formula_args;
};

/// f is an immersion iff some homomorphism g: B -> A has g o f = id. On
/// failure and when requested, a minimized distinguishing formula is built
/// from the diagram of B.
ImmersionCheck check_immersion(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> f,
                               bool want_formula = true);

/// Greedily minimized diagram of B around f(A), false of A's elements in A.
/// Requires that no retraction exists.
std::pair<PositiveFormula, std::vector<Element>> distinguishing_formula(const FiniteStructure& a,
                                                                        const FiniteStructure& b,
                                                                        std::span<const Element> f);

struct TypeCheck {
  bool holds = false;
  ElementMap witness;  // the pinned homomorphism when holds
};

/// tp(a) contained in tp(b) for positive existential types: a homomorphism
/// A -> B mapping the tuple a onto b. Throws std::invalid_argument on length mismatch.
TypeCheck tp_leq(const FiniteStructure& a, std::span<const Element> at, const FiniteStructure& b,
                 std::span<const Element> bt);

/// Atom-set containment, equalities and constants included.
bool tpqf_leq(const FiniteStructure& a, std::span<const Element> at, const FiniteStructure& b,
              std::span<const Element> bt);

}  // namespace posmod
