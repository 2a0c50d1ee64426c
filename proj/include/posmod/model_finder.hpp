#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "posmod/structure.hpp"
#include "posmod/theory.hpp"

namespace posmod {

/// Raised when a search exceeds its configured budget. Results are never
/// silently truncated.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FinderOptions {
  /// Maximum number of branching decisions per universe size; 0 = unlimited.
  std::uint64_t budget = 0;
};

struct FinderStats {
  std::uint64_t decisions = 0;
  std::uint64_t leaves = 0;
  std::uint64_t instances = 0;
};

/// All models of `t` with exactly `size` elements, one canonical
/// representative per isomorphism class, sorted by canonical code.
///
/// Each axiom is grounded over the universe (premise existentials become
/// universal variables, conclusions become disjunctions of atom
/// conjunctions) and the atom assignment is searched with unit propagation.
/// Symmetry: elements not yet mentioned by a decision are interchangeable, so
/// a branch either sets one representative atom true or the whole orbit of
/// that atom under permutations of those elements false.
std::vector<FiniteStructure> find_models(const Theory& t, int size, const FinderOptions& opt = {},
                                         FinderStats* stats = nullptr);

}  // namespace posmod
