#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "posmod/formula.hpp"
#include "posmod/semantics.hpp"
#include "posmod/structure.hpp"

namespace posmod {

/// Formulas over free variables x1..xm, at most v bound variables and at most
/// k atoms (equalities count as atoms).
struct FormulaFragment {
  int m = 3;
  int v = 3;
  int k = 3;
  bool allow_or = false;
  bool include_truth_falsity = true;

  bool operator==(const FormulaFragment&) const = default;
};

/// "m,v,k" or "m,v,k,or".
FormulaFragment parse_fragment(std::string_view text);
std::string to_string(const FormulaFragment& frag);

/// A primitive positive fragment formula: a set of atoms from the atom
/// universe (indices, ascending) using bound variables y1..y(bound) each at
/// least once.
struct PPPattern {
  std::vector<int> atoms;
  int bound = 0;

  auto operator<=>(const PPPattern&) const = default;
};

struct FragmentFormula {
  enum class Kind { Truth, Falsity, PP, Or };
  Kind kind = Kind::Truth;
  std::vector<PPPattern> disjuncts;  // one for PP, two or more for Or

  int atom_count() const;
  bool is_quantifier_free() const;
};

/// Enumerates a fragment in a fixed order: true, false, then by total atom
/// count, then lexicographically by atom indices. Formulas are distinct up to
/// renaming of bound variables. Terms are numbered x1..xm, y1..yv, then the
/// constants; atoms are the relation atoms (relations in signature order,
/// arguments lexicographic) followed by the equalities s = t with s < t.
class FragmentEnumerator {
 public:
  FragmentEnumerator(Signature sig, FormulaFragment frag);

  const Signature& signature() const { return sig_; }
  const FormulaFragment& fragment() const { return frag_; }

  /// Atom universe; variable ids 0..m-1 are free, m..m+v-1 bound, constants negative.
  const std::vector<QueryAtom>& atoms() const { return atoms_; }

  /// All pp patterns with 1..k atoms in enumeration order.
  const std::vector<PPPattern>& pp_patterns() const { return pp_; }

  /// Visits every fragment formula; `visit` returns false to stop.
  void for_each(const std::function<bool(const FragmentFormula&)>& visit) const;
  std::vector<FragmentFormula> all() const;

  /// Conjunctive query with variables 0..m-1 free and m..m+bound-1 bound.
  ConjunctiveQuery query(const PPPattern& p) const;

  /// Free variables default to x1..xm.
  PositiveFormula to_formula(const FragmentFormula& f, const std::vector<std::string>& free_names = {}) const;
  PositiveFormula to_formula(const PPPattern& p, const std::vector<std::string>& free_names = {}) const;

  /// Truth of the formula at a free-variable tuple of length m.
  bool holds(const FiniteStructure& a, const FragmentFormula& f, std::span<const Element> tuple) const;

  /// True when every bound variable of the pattern is linked to all its atoms
  /// through shared bound variables (one component).
  bool bound_connected(const PPPattern& p) const;

 private:
  Signature sig_;
  FormulaFragment frag_;
  int terms_ = 0;
  std::vector<QueryAtom> atoms_;
  std::vector<int> rel_base_;
  int eq_base_ = 0;
  std::vector<PPPattern> pp_;

  int index_of(const QueryAtom& a) const;
  int term_id(int arg) const;
  int arg_of(int term) const;
  bool canonical(const std::vector<int>& set, int& bound) const;
  void build();
};

/// Convenience stream of the whole fragment as formulas over x1..xm.
std::vector<PositiveFormula> enumerate_fragment(const Signature& sig, const FormulaFragment& frag);

}  // namespace posmod
