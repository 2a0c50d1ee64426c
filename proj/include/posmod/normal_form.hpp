#pragma once

#include <span>
#include <string>
#include <vector>

#include "posmod/formula.hpp"
#include "posmod/semantics.hpp"
#include "posmod/structure.hpp"

namespace posmod {

/// exists bound (a1 and ... and an), each ai an atom or equality.
struct PPFormula {
  std::vector<std::string> bound;
  std::vector<PositiveFormula> atoms;
};

/// Distributes disjunction outward and prenexes existentials: f is
/// equivalent to the disjunction of the result (empty list = false). Bound
/// variables are renamed apart from each other and from the free variables.
std::vector<PPFormula> pp_normal_form(const PositiveFormula& f);

PositiveFormula to_formula(const PPFormula& pp);

/// Variables 0..|free_vars|-1 are `free_vars` in order; bound variables follow.
/// Throws std::invalid_argument for a free variable missing from `free_vars`.
ConjunctiveQuery compile_pp(const PPFormula& pp, const std::vector<std::string>& free_vars, const Signature& sig);

struct CanonicalQuery {
  FiniteStructure structure;
  Tuple tuple;  // element of each free variable
};

/// The canonical structure of a pp formula: elements are the classes of
/// variables and constants under the equalities of pp, tables are its atoms.
/// eval(A, pp, x -> a) holds iff some homomorphism maps `tuple` to a.
/// Equalities between distinct constants merge their elements.
CanonicalQuery canonical_structure(const PPFormula& pp, const std::vector<std::string>& free_vars,
                                   const Signature& sig);

/// An atom over positions of a tuple and constants. Terms 0..m-1 are tuple
/// positions, m + c is constant c. rel = -1 marks an equality.
struct TermAtom {
  int rel = -1;
  std::vector<int> args;

  auto operator<=>(const TermAtom&) const = default;
};
using AtomSet = std::vector<TermAtom>;

/// Every atom (relation atoms and equalities, reflexive ones included) true of
/// the tuple. Sorted.
AtomSet tpqf(const FiniteStructure& a, std::span<const Element> tuple);

/// Positions print as p1, p2, ...
std::string to_string(const AtomSet& atoms, const Signature& sig, int tuple_length);

}  // namespace posmod
