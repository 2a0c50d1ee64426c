#include <algorithm>

#include "formula_table.hpp"
#include "posmod/analysis.hpp"
#include "posmod/normal_form.hpp"

namespace posmod {

using detail::Bits;

std::pair<PositiveFormula, std::vector<std::string>> standardize_free_vars(const PositiveFormula& phi) {
  std::vector<std::string> names = phi.free_variables();
  std::vector<std::pair<std::string, Term>> subst;
  for (std::size_t i = 0; i < names.size(); ++i) subst.emplace_back(names[i], Term::var("x" + std::to_string(i + 1)));
  return {substitute(phi, subst), names};
}

namespace {

std::vector<const FiniteStructure*> pointers(const ModelUniverse& u, const std::vector<std::size_t>& idx) {
  std::vector<const FiniteStructure*> out;
  for (auto i : idx) out.push_back(&u[i]);
  return out;
}

std::vector<std::size_t> all_indices(const ModelUniverse& u) {
  std::vector<std::size_t> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = i;
  return out;
}

FormulaFragment with_arity(FormulaFragment frag, std::size_t m) {
  if (static_cast<int>(m) > frag.m) {
    throw std::invalid_argument("formula has " + std::to_string(m) + " free variables; the fragment allows " +
                                std::to_string(frag.m));
  }
  frag.m = static_cast<int>(m);
  return frag;
}

}  // namespace

CtrReport ctr(const ModelUniverse& u, const PositiveFormula& phi, const FormulaFragment& frag, const CtrOptions& opt) {
  auto [std_phi, names] = standardize_free_vars(phi);
  FormulaFragment f = with_arity(frag, names.size());
  FragmentEnumerator en(u.theory().signature(), f);
  detail::Slots slots(pointers(u, all_indices(u)), f.m);
  detail::FormulaTable table(en, slots);
  Bits phi_bits = detail::eval_bits(std_phi, slots);

  CtrReport report;
  report.phi = phi;
  report.free_vars = names;
  report.frag = f;
  report.bound = u.bound();
  report.complement_requested = opt.complement;

  const auto formulas = en.all();
  std::vector<Bits> bits;
  std::vector<bool> refuted;
  for (const auto& psi : formulas) {
    bits.push_back(table.of(psi));
    CtrEntry e{en.to_formula(psi, names), Verdict::not_refuted(u.bound()), std::nullopt, {}, std::nullopt};
    std::size_t slot = detail::first_common(phi_bits, bits.back());
    refuted.push_back(slot != static_cast<std::size_t>(-1));
    if (refuted.back()) {
      e.member = slots.structure_of(slot);
      e.tuple = slots.tuple_of(slot);
      e.status = Verdict::refuted("member " + std::to_string(*e.member) + " " + serialize(u[*e.member]) + " at " +
                                  format_tuple(e.tuple));
    }
    report.entries.push_back(std::move(e));
  }

  if (opt.qf_basis) {
    for (std::size_t i = 0; i < formulas.size(); ++i) {
      if (refuted[i]) continue;
      for (std::size_t j = 0; j < formulas.size(); ++j) {
        if (refuted[j] || !formulas[j].is_quantifier_free()) continue;
        if (detail::subset_of(bits[i], bits[j])) {
          report.entries[i].qf = en.to_formula(formulas[j], names);
          break;
        }
      }
    }
  }

  if (opt.complement) {
    Bits hmax = slots.empty();
    for (auto i : h_maximal_members(u)) hmax = detail::bit_or(hmax, slots.range(i));
    for (std::size_t i = 0; i < formulas.size(); ++i) {
      if (refuted[i]) continue;
      if (detail::subset_of(hmax, detail::bit_or(phi_bits, bits[i]))) {
        report.complement = en.to_formula(formulas[i], names);
        break;
      }
    }
  }
  return report;
}

Verdict hmax_ctr_criterion(const FiniteStructure& a, const ModelUniverse& u, const FormulaFragment& frag) {
  FragmentEnumerator en(u.theory().signature(), frag);
  detail::Slots slots(pointers(u, all_indices(u)), frag.m);
  detail::FormulaTable table(en, slots);
  detail::Slots own({&a}, frag.m);
  detail::FormulaTable own_table(en, own);

  const auto formulas = en.all();
  std::vector<Bits> bits;
  std::vector<Bits> own_bits;
  for (const auto& f : formulas) {
    bits.push_back(table.of(f));
    own_bits.push_back(own_table.of(f));
  }
  for (std::size_t p = 0; p < formulas.size(); ++p) {
    if (!formulas[p].is_quantifier_free()) continue;
    Bits covered = own_bits[p];
    for (std::size_t c = 0; c < formulas.size(); ++c)
      if (!detail::intersects(bits[p], bits[c])) covered = detail::bit_or(covered, own_bits[c]);
    for (std::size_t t = 0; t < own.total(); ++t) {
      if (detail::test_bit(covered, t)) continue;
      return Verdict::fails(to_string(en.to_formula(formulas[p])) + " is false at " + format_tuple(own.tuple_of(t)) +
                            " and every fragment formula true there is refuted");
    }
  }
  return Verdict::holds_within(u.bound());
}

namespace {

std::vector<Tuple> injective_tuples(int n, int len) {
  std::vector<Tuple> out;
  Tuple t;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto rec = [&](auto& self) -> void {
    if (static_cast<int>(t.size()) == len) {
      out.push_back(t);
      return;
    }
    for (int e = 0; e < n; ++e) {
      if (used[e]) continue;
      used[e] = true;
      t.push_back(e);
      self(self);
      t.pop_back();
      used[e] = false;
    }
  };
  rec(rec);
  return out;
}

}  // namespace

Verdict check_robinson(const ModelUniverse& u, int tuple_cap, RobinsonScope scope) {
  if (tuple_cap < 1) throw std::invalid_argument("tuple cap must be at least 1");
  auto pcs = pc_members(u);
  if (pcs.empty()) return Verdict::inconclusive(u.bound(), "no pc member within the bound");
  for (int len = tuple_cap; len >= 1; --len) {
    std::vector<std::vector<Tuple>> tuples;
    std::vector<std::vector<AtomSet>> atoms;
    for (auto i : pcs) {
      tuples.push_back(injective_tuples(u[i].size(), len));
      atoms.emplace_back();
      for (const auto& t : tuples.back()) atoms.back().push_back(tpqf(u[i], t));
    }
    for (std::size_t mi = 0; mi < pcs.size(); ++mi) {
      for (std::size_t ni = 0; ni < pcs.size(); ++ni) {
        if (scope == RobinsonScope::Local && ni != mi) continue;
        const FiniteStructure& m = u[pcs[mi]];
        const FiniteStructure& n = u[pcs[ni]];
        for (std::size_t x = 0; x < tuples[mi].size(); ++x) {
          for (std::size_t y = 0; y < tuples[ni].size(); ++y) {
            if (mi == ni && x == y) continue;
            const auto& ax = atoms[mi][x];
            const auto& by = atoms[ni][y];
            if (!std::includes(by.begin(), by.end(), ax.begin(), ax.end())) continue;
            const Tuple& a = tuples[mi][x];
            const Tuple& b = tuples[ni][y];
            bool fwd = tp_leq(m, a, n, b).holds;
            bool back = fwd ? tp_leq(n, b, m, a).holds : true;
            if (fwd && back) continue;
            std::string where = "member " + std::to_string(pcs[mi]) + " " + serialize(m);
            if (mi != ni) where += ", member " + std::to_string(pcs[ni]) + " " + serialize(n);
            return Verdict::fails("in " + where + ": a = " + format_tuple(a) + ", b = " + format_tuple(b) +
                                  ", tpqf(a) contained in tpqf(b) but " +
                                  (fwd ? "tp(b) not contained in tp(a)" : "tp(a) not contained in tp(b)"));
          }
        }
      }
    }
  }
  return Verdict::holds_within(u.bound());
}

std::optional<PositiveFormula> qe_check(const ModelUniverse& u, const PositiveFormula& phi,
                                        const FormulaFragment& frag) {
  auto [std_phi, names] = standardize_free_vars(phi);
  FormulaFragment f = with_arity(frag, names.size());
  auto pcs = pc_members(u);
  if (pcs.empty()) return std::nullopt;
  FragmentEnumerator en(u.theory().signature(), f);
  detail::Slots slots(pointers(u, pcs), f.m);
  detail::FormulaTable table(en, slots);
  Bits target = detail::eval_bits(std_phi, slots);
  std::optional<PositiveFormula> out;
  en.for_each([&](const FragmentFormula& psi) {
    if (!psi.is_quantifier_free() || table.of(psi) != target) return true;
    out = en.to_formula(psi, names);
    return false;
  });
  return out;
}

}  // namespace posmod
