#include "posmod/fragment.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "posmod/normal_form.hpp"

namespace posmod {

FormulaFragment parse_fragment(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 3 || parts.size() > 4) throw std::invalid_argument("fragment must be m,v,k or m,v,k,or");
  FormulaFragment f;
  int* fields[3] = {&f.m, &f.v, &f.k};
  for (int i = 0; i < 3; ++i) {
    const auto& p = parts[i];
    if (p.empty() || !std::all_of(p.begin(), p.end(), [](char c) { return c >= '0' && c <= '9'; }) || p.size() > 2) {
      throw std::invalid_argument("fragment field '" + p + "' is not a small non-negative integer");
    }
    *fields[i] = std::stoi(p);
  }
  if (parts.size() == 4) {
    if (parts[3] != "or") throw std::invalid_argument("fourth fragment field must be 'or'");
    f.allow_or = true;
  }
  return f;
}

std::string to_string(const FormulaFragment& frag) {
  std::string out = std::to_string(frag.m) + "," + std::to_string(frag.v) + "," + std::to_string(frag.k);
  if (frag.allow_or) out += ",or";
  return out;
}

int FragmentFormula::atom_count() const {
  int n = 0;
  for (const auto& d : disjuncts) n += static_cast<int>(d.atoms.size());
  return n;
}

bool FragmentFormula::is_quantifier_free() const {
  return std::all_of(disjuncts.begin(), disjuncts.end(), [](const PPPattern& p) { return p.bound == 0; });
}

FragmentEnumerator::FragmentEnumerator(Signature sig, FormulaFragment frag) : sig_(std::move(sig)), frag_(frag) {
  if (frag_.m < 0 || frag_.v < 0 || frag_.k < 0) throw std::invalid_argument("fragment parameters must be non-negative");
  terms_ = frag_.m + frag_.v + static_cast<int>(sig_.constants().size());
  build();
}

int FragmentEnumerator::arg_of(int term) const {
  const int vars = frag_.m + frag_.v;
  return term < vars ? term : -(term - vars) - 1;
}

int FragmentEnumerator::term_id(int arg) const { return arg >= 0 ? arg : frag_.m + frag_.v + (-arg - 1); }

int FragmentEnumerator::index_of(const QueryAtom& a) const {
  if (a.rel >= 0) {
    int idx = 0;
    for (int arg : a.args) idx = idx * terms_ + term_id(arg);
    return rel_base_[a.rel] + idx;
  }
  int s = term_id(a.args[0]);
  int t = term_id(a.args[1]);
  if (s > t) std::swap(s, t);
  return eq_base_ + s * terms_ - s * (s + 1) / 2 + (t - s - 1);
}

void FragmentEnumerator::build() {
  for (std::size_t r = 0; r < sig_.relations().size(); ++r) {
    rel_base_.push_back(static_cast<int>(atoms_.size()));
    const int arity = sig_.relations()[r].arity;
    std::vector<int> t(arity, 0);
    if (terms_ == 0) continue;
    for (;;) {
      QueryAtom a{static_cast<int>(r), {}};
      for (int x : t) a.args.push_back(arg_of(x));
      atoms_.push_back(std::move(a));
      int i = arity - 1;
      while (i >= 0 && t[i] == terms_ - 1) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
  }
  eq_base_ = static_cast<int>(atoms_.size());
  for (int s = 0; s < terms_; ++s)
    for (int t = s + 1; t < terms_; ++t) atoms_.push_back({-1, {arg_of(s), arg_of(t)}});

  // Bound-variable mask per atom.
  const int m = frag_.m;
  std::vector<unsigned> mask(atoms_.size(), 0);
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (int arg : atoms_[i].args)
      if (arg >= m) mask[i] |= 1u << (arg - m);

  std::vector<int> set;
  const int total = static_cast<int>(atoms_.size());
  for (int size = 1; size <= frag_.k; ++size) {
    set.assign(size, 0);
    // Lexicographic walk over strictly increasing index sequences.
    std::function<void(int, int, unsigned)> rec = [&](int pos, int start, unsigned used) {
      if (pos == size) {
        // Used bound variables must be y1..yj.
        if ((used & (used + 1)) != 0) return;
        int bound = 0;
        if (canonical(set, bound)) pp_.push_back({set, bound});
        return;
      }
      for (int i = start; i <= total - (size - pos); ++i) {
        set[pos] = i;
        rec(pos + 1, i + 1, used | mask[i]);
      }
    };
    rec(0, 0, 0);
  }
}

bool FragmentEnumerator::canonical(const std::vector<int>& set, int& bound) const {
  const int m = frag_.m;
  unsigned used = 0;
  for (int i : set)
    for (int arg : atoms_[i].args)
      if (arg >= m) used |= 1u << (arg - m);
  bound = std::popcount(used);
  if (bound <= 1) return true;
  std::vector<int> perm(bound);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> mapped(set.size());
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (std::size_t j = 0; j < set.size(); ++j) {
      QueryAtom a = atoms_[set[j]];
      for (int& arg : a.args)
        if (arg >= m) arg = m + perm[arg - m];
      mapped[j] = index_of(a);
    }
    std::sort(mapped.begin(), mapped.end());
    if (mapped < set) return false;
  }
  return true;
}

void FragmentEnumerator::for_each(const std::function<bool(const FragmentFormula&)>& visit) const {
  if (frag_.include_truth_falsity) {
    if (!visit({FragmentFormula::Kind::Truth, {}})) return;
    if (!visit({FragmentFormula::Kind::Falsity, {}})) return;
  }
  std::size_t next = 0;
  for (int size = 1; size <= frag_.k; ++size) {
    for (; next < pp_.size() && static_cast<int>(pp_[next].atoms.size()) == size; ++next) {
      if (!visit({FragmentFormula::Kind::PP, {pp_[next]}})) return;
    }
    if (!frag_.allow_or || size < 2) continue;
    // Sets of at least two pp patterns (in pattern order) with total size `size`.
    std::vector<std::size_t> chosen;
    bool stop = false;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
      if (stop) return;
      if (remaining == 0) {
        if (chosen.size() < 2) return;
        FragmentFormula f{FragmentFormula::Kind::Or, {}};
        for (auto i : chosen) f.disjuncts.push_back(pp_[i]);
        if (!visit(f)) stop = true;
        return;
      }
      for (std::size_t i = start; i < pp_.size() && !stop; ++i) {
        const int s = static_cast<int>(pp_[i].atoms.size());
        if (s > remaining) continue;
        if (s == size) continue;  // a single disjunct is not a disjunction
        chosen.push_back(i);
        rec(i + 1, remaining - s);
        chosen.pop_back();
      }
    };
    rec(0, size);
    if (stop) return;
  }
}

std::vector<FragmentFormula> FragmentEnumerator::all() const {
  std::vector<FragmentFormula> out;
  for_each([&](const FragmentFormula& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

ConjunctiveQuery FragmentEnumerator::query(const PPPattern& p) const {
  ConjunctiveQuery q;
  q.num_vars = frag_.m + p.bound;
  for (int i : p.atoms) q.atoms.push_back(atoms_[i]);
  return q;
}

PositiveFormula FragmentEnumerator::to_formula(const PPPattern& p, const std::vector<std::string>& free_names) const {
  std::vector<std::string> names = free_names;
  for (int i = static_cast<int>(names.size()); i < frag_.m; ++i) names.push_back("x" + std::to_string(i + 1));
  std::string prefix = "y";
  for (const char* cand : {"y", "z", "w", "u"}) {
    prefix = cand;
    bool clash = false;
    for (int j = 1; j <= frag_.v; ++j)
      if (std::find(names.begin(), names.end(), prefix + std::to_string(j)) != names.end()) clash = true;
    if (!clash) break;
  }
  auto term = [&](int arg) {
    if (arg < 0) return Term::constant(sig_.constants()[-arg - 1]);
    if (arg < frag_.m) return Term::var(names[arg]);
    return Term::var(prefix + std::to_string(arg - frag_.m + 1));
  };
  std::vector<PositiveFormula> parts;
  for (int i : p.atoms) {
    const auto& a = atoms_[i];
    if (a.rel < 0) {
      parts.push_back(PositiveFormula::equality(term(a.args[0]), term(a.args[1])));
    } else {
      std::vector<Term> args;
      for (int arg : a.args) args.push_back(term(arg));
      parts.push_back(PositiveFormula::atom(sig_.relations()[a.rel].name, std::move(args)));
    }
  }
  std::vector<std::string> bound;
  for (int j = 1; j <= p.bound; ++j) bound.push_back(prefix + std::to_string(j));
  return PositiveFormula::exists(std::move(bound), PositiveFormula::conj(std::move(parts)));
}

PositiveFormula FragmentEnumerator::to_formula(const FragmentFormula& f, const std::vector<std::string>& free_names) const {
  switch (f.kind) {
    case FragmentFormula::Kind::Truth:
      return PositiveFormula::truth();
    case FragmentFormula::Kind::Falsity:
      return PositiveFormula::falsity();
    default: {
      std::vector<PositiveFormula> parts;
      for (const auto& d : f.disjuncts) parts.push_back(to_formula(d, free_names));
      return PositiveFormula::disj(std::move(parts));
    }
  }
}

bool FragmentEnumerator::holds(const FiniteStructure& a, const FragmentFormula& f, std::span<const Element> tuple) const {
  if (f.kind == FragmentFormula::Kind::Truth) return true;
  if (f.kind == FragmentFormula::Kind::Falsity) return false;
  for (const auto& d : f.disjuncts) {
    auto q = query(d);
    std::vector<bool> pinned(q.num_vars, false);
    std::vector<Element> values(q.num_vars, 0);
    for (int i = 0; i < frag_.m; ++i) {
      pinned[i] = true;
      values[i] = tuple[i];
    }
    QuerySolver solver(q, pinned);
    if (solver.satisfiable(a, values)) return true;
  }
  return false;
}

bool FragmentEnumerator::bound_connected(const PPPattern& p) const {
  const int m = frag_.m;
  if (p.bound == 0) return p.atoms.size() == 1;
  std::vector<unsigned> masks;
  for (int i : p.atoms) {
    unsigned mk = 0;
    for (int arg : atoms_[i].args)
      if (arg >= m) mk |= 1u << (arg - m);
    if (mk == 0) return false;
    masks.push_back(mk);
  }
  unsigned reach = masks[0];
  bool grew = true;
  while (grew) {
    grew = false;
    for (unsigned mk : masks) {
      if ((mk & reach) && (mk | reach) != reach) {
        reach |= mk;
        grew = true;
      }
    }
  }
  return std::all_of(masks.begin(), masks.end(), [&](unsigned mk) { return (mk & ~reach) == 0; });
}

std::vector<PositiveFormula> enumerate_fragment(const Signature& sig, const FormulaFragment& frag) {
  FragmentEnumerator en(sig, frag);
  std::vector<PositiveFormula> out;
  en.for_each([&](const FragmentFormula& f) {
    out.push_back(en.to_formula(f));
    return true;
  });
  return out;
}

}  // namespace posmod
