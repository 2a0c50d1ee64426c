#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posmod/formula.hpp"
#include "posmod/structure.hpp"

namespace posmod {

/// forall vars (premise -> conclusion). An h-universal sentence has
/// conclusion = false.
struct HInductiveSentence {
  std::vector<std::string> vars;
  PositiveFormula premise = PositiveFormula::truth();
  PositiveFormula conclusion = PositiveFormula::falsity();

  bool is_h_universal() const { return conclusion.kind() == PositiveFormula::Kind::Falsity; }
  bool operator==(const HInductiveSentence&) const = default;
};

struct Axiom {
  std::string label;
  HInductiveSentence sentence;
};

class Theory {
 public:
  Theory() = default;
  Theory(std::string name, Signature sig, std::vector<Axiom> axioms);

  const std::string& name() const { return name_; }
  const Signature& signature() const { return sig_; }
  const std::vector<Axiom>& axioms() const { return axioms_; }

  /// Returns a copy with extra axioms appended (labels must stay distinct).
  Theory with_axioms(const std::vector<Axiom>& extra, std::string name = {}) const;

 private:
  std::string name_;
  Signature sig_;
  std::vector<Axiom> axioms_;
};

/// Validates closedness: every free variable of premise and conclusion is
/// among `vars`. Throws std::invalid_argument otherwise.
void check_closed(const HInductiveSentence& s);

/// Parses "(forall (VARS) (=> f f))" or "(not f)".
HInductiveSentence parse_sentence(const SExpr& expr, const Signature& sig);
HInductiveSentence parse_sentence(std::string_view text, const Signature& sig);

Theory parse_theory(std::string_view text);

/// h-universal sentences without universal variables print as "(not f)".
std::string to_string(const HInductiveSentence& s);
std::string serialize(const Theory& t);

/// Stable 64-bit FNV-1a hash of the serialized theory.
std::uint64_t theory_hash(const Theory& t);

}  // namespace posmod
