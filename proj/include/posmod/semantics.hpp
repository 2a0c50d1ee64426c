#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posmod/formula.hpp"
#include "posmod/structure.hpp"
#include "posmod/theory.hpp"

namespace posmod {

using Assignment = std::vector<std::pair<std::string, Element>>;

std::string format_assignment(const Assignment& asg);

/// Tarskian truth of a positive formula. Throws std::invalid_argument for an
/// unassigned free variable and SignatureMismatch for unknown symbols.
bool eval(const FiniteStructure& a, const PositiveFormula& f, const Assignment& asg = {});

struct SatisfactionResult {
  bool holds = true;
  std::string label;      // violated axiom
  Assignment assignment;  // universal variables falsifying it
};

/// Checks every axiom; on failure reports the first axiom (theory order) and
/// the lexicographically least falsifying assignment of its variables.
SatisfactionResult satisfies(const FiniteStructure& a, const Theory& t);

/// A conjunction of atoms over numbered variables. Argument v >= 0 is a
/// variable; v < 0 denotes constant -(v + 1) of the signature.
struct QueryAtom {
  int rel = -1;  // -1 for equality
  std::vector<int> args;

  bool operator==(const QueryAtom&) const = default;
  auto operator<=>(const QueryAtom&) const = default;
};

struct ConjunctiveQuery {
  int num_vars = 0;
  std::vector<QueryAtom> atoms;
};

/// Backtracking evaluation of conjunctive queries with a fixed set of pinned
/// variables. The variable order is computed once at construction.
class QuerySolver {
 public:
  QuerySolver(const ConjunctiveQuery& q, const std::vector<bool>& pinned);

  /// Visits every total assignment extending `values` (entries of pinned
  /// variables are read, the rest overwritten). `visit` returns false to stop.
  /// Returns false when stopped early.
  bool solve(const FiniteStructure& a, std::vector<Element>& values,
             const std::function<bool(const std::vector<Element>&)>& visit) const;

  /// True when some extension satisfies every atom.
  bool satisfiable(const FiniteStructure& a, std::vector<Element>& values) const;

 private:
  struct Step {
    int var;
    std::vector<int> checks;  // atoms fully assigned once `var` is
  };
  ConjunctiveQuery q_;
  std::vector<int> initial_checks_;
  std::vector<Step> steps_;

  bool check(const FiniteStructure& a, const QueryAtom& atom, const std::vector<Element>& values) const;
  template <class Visit>
  bool descend(const FiniteStructure& a, std::size_t depth, std::vector<Element>& values, Visit& visit) const;
};

}  // namespace posmod
