#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace posmod {

/// Universe elements are 0..size-1.
using Element = int;
using Tuple = std::vector<Element>;
/// A total function on a source universe, stored as image-per-element.
using ElementMap = std::vector<Element>;

class SignatureMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RelationSymbol {
  std::string name;
  int arity = 0;

  bool operator==(const RelationSymbol&) const = default;
};

/// A relational signature with constants. Function symbols are encoded as
/// relations by the corpus generators.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<RelationSymbol> relations, std::vector<std::string> constants);

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }

  std::optional<std::size_t> relation_index(std::string_view name) const;
  std::optional<std::size_t> constant_index(std::string_view name) const;
  bool has_symbol(std::string_view name) const;

  /// Returns this signature extended with extra constants (names must be fresh).
  Signature with_constants(const std::vector<std::string>& extra) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<RelationSymbol> relations_;
  std::vector<std::string> constants_;
};

/// A finite L-structure over the universe {0..size-1}. Immutable once built.
class FiniteStructure {
 public:
  /// Validates every invariant: tuple ranges and arities, constant
  /// assignment, size >= 1. Duplicate tuples are merged.
  FiniteStructure(Signature sig, int size, std::vector<std::vector<Tuple>> tables,
                  std::vector<Element> constant_values);

  /// A structure with empty tables; only valid for constant-free signatures.
  static FiniteStructure empty(Signature sig, int size);

  const Signature& signature() const { return sig_; }
  int size() const { return size_; }

  /// Sorted, duplicate-free tuples of relation `rel`.
  const std::vector<Tuple>& table(std::size_t rel) const { return tables_[rel]; }
  const std::vector<Element>& constant_values() const { return constants_; }
  Element constant_value(std::size_t c) const { return constants_[c]; }

  bool holds(std::size_t rel, std::span<const Element> args) const;
  bool holds(std::size_t rel, std::initializer_list<Element> args) const {
    return holds(rel, std::span<const Element>(args.begin(), args.size()));
  }

  std::size_t tuple_count() const;

  bool operator==(const FiniteStructure& other) const;

 private:
  Signature sig_;
  int size_ = 1;
  std::vector<std::vector<Tuple>> tables_;
  std::vector<std::vector<bool>> members_;
  std::vector<Element> constants_;

  std::size_t cell(std::size_t rel, std::span<const Element> args) const;
};

/// Parses the s-expression structure format. With `sig`, relations missing
/// from the file are empty and unknown symbols are errors; without it the
/// signature is inferred from the file (relations in order of appearance).
FiniteStructure parse_structure(std::string_view text, const Signature* sig = nullptr);
FiniteStructure parse_structure(std::string_view text, const Signature& sig);

/// Deterministic serialization: relations in signature order, tuples sorted.
/// Empty relations are omitted.
std::string serialize(const FiniteStructure& s);

/// "(map (0 2) (1 0) ...)"
std::string serialize_map(const ElementMap& map);
ElementMap parse_map(std::string_view text, int source_size);

std::string format_tuple(std::span<const Element> tuple);

/// Re-types a structure over a larger signature that contains every symbol
/// of the old one with the same arity; new relations are empty.
FiniteStructure extend_signature(const FiniteStructure& s, const Signature& wider);

/// Merges two constant-free signatures (union of relations; arities must agree).
Signature merge_signatures(const Signature& a, const Signature& b);

/// Applies a bijection old->new to the universe.
FiniteStructure relabel(const FiniteStructure& s, std::span<const Element> old_to_new);

FiniteStructure induced_substructure(const FiniteStructure& s, std::span<const Element> subset);
FiniteStructure disjoint_sum(const FiniteStructure& a, const FiniteStructure& b);
/// Universe element (i, j) is encoded as i * |b| + j.
FiniteStructure product(const FiniteStructure& a, const FiniteStructure& b);

/// Common example structures over the signature {S/2}.
namespace shapes {
Signature digraph_signature(const std::string& rel = "S");
/// Directed p-cycle 0->1->...->p-1->0.
FiniteStructure cycle(int p, const std::string& rel = "S");
/// Directed path with `n` elements 0->1->...->n-1.
FiniteStructure chain(int n, const std::string& rel = "S");
/// `n` points and no edges.
FiniteStructure points(int n, const std::string& rel = "S");
}  // namespace shapes

}  // namespace posmod
