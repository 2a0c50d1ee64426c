#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "posmod/sexpr.hpp"
#include "posmod/structure.hpp"

namespace posmod {

struct Term {
  enum class Kind { Variable, Constant };

  Kind kind = Kind::Variable;
  std::string name;

  static Term var(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }

  bool is_variable() const { return kind == Kind::Variable; }
  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

/// A formula of the positive fragment: atoms, equalities, true/false, and/or,
/// and existential quantification. No negation or universal quantifier can
/// be represented. Values are immutable and cheap to copy.
class PositiveFormula {
 public:
  enum class Kind { Truth, Falsity, Atom, Equality, And, Or, Exists };

  static PositiveFormula truth();
  static PositiveFormula falsity();
  static PositiveFormula atom(std::string relation, std::vector<Term> args);
  static PositiveFormula equality(Term lhs, Term rhs);
  /// Flattens nested conjunctions; zero children give truth, one child is returned as is.
  static PositiveFormula conj(std::vector<PositiveFormula> children);
  static PositiveFormula disj(std::vector<PositiveFormula> children);
  /// An empty variable list returns the body unchanged.
  static PositiveFormula exists(std::vector<std::string> vars, PositiveFormula body);

  Kind kind() const;
  const std::string& relation() const;
  const std::vector<Term>& args() const;  // atom arguments, or {lhs, rhs} for equality
  const std::vector<PositiveFormula>& children() const;
  const std::vector<std::string>& bound() const;
  const PositiveFormula& body() const;

  /// Free variables in order of first occurrence.
  std::vector<std::string> free_variables() const;
  bool is_quantifier_free() const;
  /// Number of atom and equality leaves.
  int atom_count() const;

  bool operator==(const PositiveFormula& other) const;

 private:
  struct Node;
  std::shared_ptr<const Node> node_;

  explicit PositiveFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
};

std::string to_string(const Term& t);
std::string to_string(const PositiveFormula& f);

/// Parses a positive formula. Names that are constants of `sig` become
/// constant terms; all other term names are variables.
PositiveFormula parse_formula(std::string_view text, const Signature& sig);
PositiveFormula parse_formula(const SExpr& expr, const Signature& sig);

/// Replaces free occurrences of variables by terms.
PositiveFormula substitute(const PositiveFormula& f, const std::vector<std::pair<std::string, Term>>& subst);

}  // namespace posmod
