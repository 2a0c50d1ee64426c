#include "formula_table.hpp"

#include <bit>
#include <string>

#include "posmod/parallel.hpp"
#include "posmod/semantics.hpp"

namespace posmod::detail {

Slots::Slots(std::vector<const FiniteStructure*> structures, int m) : structures_(std::move(structures)), m_(m) {
  offsets_.push_back(0);
  for (const auto* s : structures_) {
    std::size_t n = 1;
    for (int i = 0; i < m_; ++i) n *= static_cast<std::size_t>(s->size());
    total_ += n;
    offsets_.push_back(total_);
  }
}

std::size_t Slots::structure_of(std::size_t slot) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), slot);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

Tuple Slots::tuple_of(std::size_t slot) const {
  std::size_t s = structure_of(slot);
  std::size_t r = slot - offsets_[s];
  const auto n = static_cast<std::size_t>(structures_[s]->size());
  Tuple t(static_cast<std::size_t>(m_));
  for (int i = m_ - 1; i >= 0; --i) {
    t[i] = static_cast<Element>(r % n);
    r /= n;
  }
  return t;
}

std::size_t Slots::slot_of(std::size_t s, std::span<const Element> tuple) const {
  std::size_t r = 0;
  const auto n = static_cast<std::size_t>(structures_[s]->size());
  for (Element e : tuple) r = r * n + static_cast<std::size_t>(e);
  return offsets_[s] + r;
}

Bits Slots::full() const {
  Bits b = empty();
  for (std::size_t i = 0; i < total_; ++i) set_bit(b, i);
  return b;
}

Bits Slots::range(std::size_t s) const {
  Bits b = empty();
  for (std::size_t i = offsets_[s]; i < offsets_[s + 1]; ++i) set_bit(b, i);
  return b;
}

FormulaTable::FormulaTable(const FragmentEnumerator& en, const Slots& slots) : slots_(slots) {
  const auto& pps = en.pp_patterns();
  pp_bits_.assign(pps.size(), slots.empty());
  for (std::size_t i = 0; i < pps.size(); ++i) index_.emplace(pps[i], i);
  const int m = slots.arity();
  parallel_for(pps.size(), [&](std::size_t i) {
    ConjunctiveQuery q = en.query(pps[i]);
    QuerySolver solver(q, std::vector<bool>(static_cast<std::size_t>(q.num_vars), false));
    Bits& bits = pp_bits_[i];
    for (std::size_t s = 0; s < slots.structures().size(); ++s) {
      std::vector<Element> values(static_cast<std::size_t>(q.num_vars), 0);
      solver.solve(*slots.structures()[s], values, [&](const std::vector<Element>& v) {
        set_bit(bits, slots.slot_of(s, std::span<const Element>(v.data(), static_cast<std::size_t>(m))));
        return true;
      });
    }
  });
}

const Bits& FormulaTable::of(const PPPattern& p) const { return pp_bits_.at(index_.at(p)); }

Bits FormulaTable::of(const FragmentFormula& f) const {
  switch (f.kind) {
    case FragmentFormula::Kind::Truth:
      return slots_.full();
    case FragmentFormula::Kind::Falsity:
      return slots_.empty();
    default: {
      Bits out = slots_.empty();
      for (const auto& d : f.disjuncts) out = bit_or(out, of(d));
      return out;
    }
  }
}

Bits eval_bits(const PositiveFormula& f, const Slots& slots) {
  Bits out = slots.empty();
  std::vector<std::string> names;
  for (int i = 1; i <= slots.arity(); ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t slot = 0; slot < slots.total(); ++slot) {
    Tuple t = slots.tuple_of(slot);
    Assignment asg;
    for (int i = 0; i < slots.arity(); ++i) asg.emplace_back(names[i], t[i]);
    if (eval(*slots.structures()[slots.structure_of(slot)], f, asg)) set_bit(out, slot);
  }
  return out;
}

bool intersects(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

std::size_t first_common(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::uint64_t w = a[i] & b[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w));
  return static_cast<std::size_t>(-1);
}

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

Bits bit_or(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] | b[i];
  return out;
}

}  // namespace posmod::detail
