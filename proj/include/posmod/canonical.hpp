#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posmod/structure.hpp"

namespace posmod {

/// Result of canonical labeling: `order[p]` is the original element placed at
/// canonical position p; `code` is the canonical byte string.
struct CanonicalLabeling {
  std::string code;
  std::vector<Element> order;
};

/// The code of a labeled structure is the concatenation, over positions
/// p = 0..n-1, of one bit per constant (0 iff the constant names p) followed by
/// one bit per relation tuple whose largest component is p (relations in
/// signature order, tuples in lexicographic order; 0 iff the tuple holds).
/// The canonical code is the lexicographic minimum of that code over all n!
/// relabelings. Every prefix of the code describes the induced substructure on
/// the first positions, which is what lets the search prune level by level.
CanonicalLabeling canonical_labeling(const FiniteStructure& s);

/// "<n>:" followed by the minimal code bits as '0'/'1' characters.
std::string canonical_form(const FiniteStructure& s);

/// The structure relabeled into its canonical order.
FiniteStructure canonical_representative(const FiniteStructure& s);

/// Code of `s` under its current labeling (no minimization).
std::string labeled_code(const FiniteStructure& s);

/// A bijection a -> b preserving and reflecting all tables and constants.
/// Throws SignatureMismatch when the signatures differ.
std::optional<ElementMap> isomorphic(const FiniteStructure& a, const FiniteStructure& b);

/// Pairs (u, v) whose transposition is an automorphism, as a class id per
/// element (elements with equal ids are interchangeable).
std::vector<int> twin_classes(const FiniteStructure& s);

}  // namespace posmod
