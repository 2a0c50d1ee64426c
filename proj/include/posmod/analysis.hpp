#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posmod/fragment.hpp"
#include "posmod/morphisms.hpp"
#include "posmod/universe.hpp"
#include "posmod/verdict.hpp"

namespace posmod {

/// Thrown when a structure handed to a class-level check is not a model of
/// the universe's theory.
class NotAModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Every check below quantifies over the members of the universe only.

/// Every homomorphism from `a` into a member is an immersion. FAILS names the
/// first member (universe order), the lexicographically least bad
/// homomorphism and a positive formula over x<e> (e an element of `a`) true
/// of the image and false in `a`.
Verdict is_pc(const FiniteStructure& a, const ModelUniverse& u);
Verdict is_pc(std::size_t member, const ModelUniverse& u);

/// Every homomorphism from `a` into a member is an embedding. FAILS carries
/// the member, the homomorphism and the violated condition.
Verdict is_h_maximal(const FiniteStructure& a, const ModelUniverse& u);
Verdict is_h_maximal(std::size_t member, const ModelUniverse& u);

/// Indices of flagged members, in universe order. Flags are cached in `u`.
std::vector<std::size_t> pc_members(const ModelUniverse& u);
std::vector<std::size_t> h_maximal_members(const ModelUniverse& u);

struct Continuation {
  Verdict verdict;  // HOLDS_WITHIN or NOT_FOUND_WITHIN
  std::optional<std::size_t> member;
  ElementMap map;
};

/// First pc member (universe order) receiving a homomorphism from `a`, with
/// the lexicographically least such homomorphism.
Continuation pc_continuation(const FiniteStructure& a, const ModelUniverse& u);

/// For all members B, C and homomorphisms f: A -> B, g: A -> C some member D
/// closes the square. FAILS carries the first (B, C, f, g) with no D.
Verdict is_amalgamation_basis(const FiniteStructure& a, const ModelUniverse& u);

struct Amalgam {
  Verdict verdict;  // HOLDS_WITHIN or NOT_FOUND_WITHIN
  std::optional<std::size_t> member;
  ElementMap g;  // B -> D, a homomorphism
  ElementMap j;  // C -> D, an immersion
};

/// Searches D, then j (lexicographic), then g with g o i = j o f.
/// Throws std::invalid_argument when i or f is not a homomorphism or i is
/// not an immersion.
Amalgam asymmetric_amalgam(const FiniteStructure& a, const FiniteStructure& b, const FiniteStructure& c,
                           const ElementMap& i, const ElementMap& f, const ModelUniverse& u);

/// Every two members have a common continuation among the members.
Verdict is_complete(const ModelUniverse& u);

enum class SentenceKind { HUniversal, HInductive };

/// Fragment sentences true in m. H_UNIVERSAL: (not phi) for every fragment
/// phi, universally closed over its free variables. H_INDUCTIVE: additionally
/// forall x (phi -> psi) with phi quantifier-free, psi any fragment formula
/// other than true, phi not false. With params the signature gains constants
/// c0, c1, ... naming the elements of m.
std::vector<HInductiveSentence> theory_of(const FiniteStructure& m, const FormulaFragment& frag, SentenceKind kind,
                                          bool with_params = false);

/// A key equal for sentences that differ only by renaming variables and by
/// writing (not (exists x f)) as (forall x (=> f false)).
std::string sentence_key(const HInductiveSentence& s, const Signature& sig);

struct SentenceSet {
  Verdict verdict;  // HOLDS_WITHIN(bound), or INCONCLUSIVE when no pc member exists
  std::vector<HInductiveSentence> sentences;

  bool contains(const HInductiveSentence& s, const Signature& sig) const;
};

/// Fragment sentences true in every pc member (h-inductive resp. h-universal).
SentenceSet kaiser_hull(const ModelUniverse& u, const FormulaFragment& frag);
SentenceSet universal_companion(const ModelUniverse& u, const FormulaFragment& frag);

/// Same pc members up to isomorphism at bound n. Identical theories give HOLDS.
/// Throws SignatureMismatch for different signatures.
Verdict companion_check(const Theory& t1, const Theory& t2, int n, const FinderOptions& opt = {});

struct CtrOptions {
  bool qf_basis = false;
  bool complement = false;
};

struct CtrEntry {
  PositiveFormula psi = PositiveFormula::truth();
  Verdict status;  // REFUTED or NOT_REFUTED_UP_TO
  std::optional<std::size_t> member;
  Tuple tuple;
  std::optional<PositiveFormula> qf;  // qf_basis partner of a non-refuted psi
};

struct CtrReport {
  PositiveFormula phi = PositiveFormula::truth();
  std::vector<std::string> free_vars;
  FormulaFragment frag;
  int bound = 0;
  std::vector<CtrEntry> entries;
  bool complement_requested = false;
  std::optional<PositiveFormula> complement;
};

/// Candidates psi range over the fragment with m = number of free variables
/// of phi; x1, x2, ... are printed as phi's variables (first occurrence
/// order). A psi is refuted by the first member and tuple satisfying phi and psi.
/// Throws std::invalid_argument when phi has more free variables than frag.m.
CtrReport ctr(const ModelUniverse& u, const PositiveFormula& phi, const FormulaFragment& frag,
              const CtrOptions& opt = {});

/// Criterion from the characterization of h-maximal models by Ctr sets: for
/// every quantifier-free fragment phi over m variables and tuple a with
/// a |= not phi, some fragment psi true of a is not refuted. FAILS carries
/// the first uncovered (phi, a).
Verdict hmax_ctr_criterion(const FiniteStructure& a, const ModelUniverse& u, const FormulaFragment& frag);

enum class RobinsonScope { Local, Global };

/// For in-scope pairs of injective tuples (a, b) of pc members with
/// tpqf(a) contained in tpqf(b), checks tp(a) = tp(b). Lengths go from
/// tuple_cap down to 1; LOCAL pairs tuples within one pc member, GLOBAL
/// across every ordered pair of pc members. INCONCLUSIVE without pc members.
Verdict check_robinson(const ModelUniverse& u, int tuple_cap, RobinsonScope scope);

/// First quantifier-free fragment formula agreeing with phi on every pc
/// member and every assignment; printed over phi's variable names.
std::optional<PositiveFormula> qe_check(const ModelUniverse& u, const PositiveFormula& phi,
                                        const FormulaFragment& frag);

/// Free variables of phi in first-occurrence order, renamed to x1, x2, ...;
/// the returned names are phi's originals.
std::pair<PositiveFormula, std::vector<std::string>> standardize_free_vars(const PositiveFormula& phi);

}  // namespace posmod
