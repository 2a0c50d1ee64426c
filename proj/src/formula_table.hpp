#pragma once

// Truth of fragment formulas over every tuple of a list of structures, as
// bitsets. Slot order: structures in list order, tuples lexicographic.

#include <cstdint>
#include <map>
#include <vector>

#include "posmod/fragment.hpp"
#include "posmod/structure.hpp"

namespace posmod::detail {

using Bits = std::vector<std::uint64_t>;

class Slots {
 public:
  Slots(std::vector<const FiniteStructure*> structures, int m);

  int arity() const { return m_; }
  std::size_t total() const { return total_; }
  std::size_t words() const { return (total_ + 63) / 64; }
  const std::vector<const FiniteStructure*>& structures() const { return structures_; }
  std::size_t offset(std::size_t s) const { return offsets_[s]; }
  std::size_t count(std::size_t s) const { return offsets_[s + 1] - offsets_[s]; }

  std::size_t structure_of(std::size_t slot) const;
  Tuple tuple_of(std::size_t slot) const;
  std::size_t slot_of(std::size_t s, std::span<const Element> tuple) const;

  Bits empty() const { return Bits(words(), 0); }
  Bits full() const;
  /// Slots of structure s.
  Bits range(std::size_t s) const;

 private:
  std::vector<const FiniteStructure*> structures_;
  int m_ = 0;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

class FormulaTable {
 public:
  /// Evaluates every pp pattern of `en` on all slots (in parallel).
  FormulaTable(const FragmentEnumerator& en, const Slots& slots);

  Bits of(const FragmentFormula& f) const;
  const Bits& of(const PPPattern& p) const;

 private:
  const Slots& slots_;
  std::map<PPPattern, std::size_t> index_;
  std::vector<Bits> pp_bits_;
};

/// Slots where an arbitrary positive formula over x1..xm holds.
Bits eval_bits(const PositiveFormula& f, const Slots& slots);

inline void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
inline bool test_bit(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1; }
bool intersects(const Bits& a, const Bits& b);
/// First common slot, or npos.
std::size_t first_common(const Bits& a, const Bits& b);
bool subset_of(const Bits& a, const Bits& b);
Bits bit_or(const Bits& a, const Bits& b);

}  // namespace posmod::detail
