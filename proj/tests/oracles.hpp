#pragma once

// Brute-force reference implementations. They share no search code with the
// library: maps and tables are enumerated exhaustively and axioms are
// evaluated with the Tarskian evaluator.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "posmod/fragment.hpp"
#include "posmod/semantics.hpp"
#include "posmod/structure.hpp"
#include "posmod/theory.hpp"

namespace oracle {

using namespace posmod;

// Calls visit(map) for every total map {0..n-1} -> {0..m-1}.
inline void for_each_map(int n, int m, const std::function<void(const ElementMap&)>& visit) {
  ElementMap f(static_cast<std::size_t>(n), 0);
  if (m == 0) return;
  for (;;) {
    visit(f);
    int i = n - 1;
    while (i >= 0 && f[i] == m - 1) f[i--] = 0;
    if (i < 0) return;
    ++f[i];
  }
}

inline bool preserves(const FiniteStructure& a, const FiniteStructure& b, const ElementMap& f) {
  for (std::size_t c = 0; c < a.signature().constants().size(); ++c)
    if (f[a.constant_value(c)] != b.constant_value(c)) return false;
  for (std::size_t r = 0; r < a.signature().relations().size(); ++r) {
    for (const auto& t : a.table(r)) {
      Tuple img;
      for (Element e : t) img.push_back(f[e]);
      if (!b.holds(r, img)) return false;
    }
  }
  return true;
}

inline std::vector<ElementMap> homs(const FiniteStructure& a, const FiniteStructure& b) {
  std::vector<ElementMap> out;
  for_each_map(a.size(), b.size(), [&](const ElementMap& f) {
    if (preserves(a, b, f)) out.push_back(f);
  });
  return out;
}

inline bool isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.size() != b.size() || a.tuple_count() != b.tuple_count()) return false;
  ElementMap p(static_cast<std::size_t>(a.size()));
  std::iota(p.begin(), p.end(), 0);
  do {
    if (preserves(a, b, p)) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

// forall vars (premise -> conclusion), every assignment tried.
inline bool holds(const FiniteStructure& a, const HInductiveSentence& s) {
  bool ok = true;
  for_each_map(static_cast<int>(s.vars.size()), a.size(), [&](const ElementMap& v) {
    if (!ok) return;
    Assignment asg;
    for (std::size_t i = 0; i < s.vars.size(); ++i) asg.emplace_back(s.vars[i], v[i]);
    if (eval(a, s.premise, asg) && !eval(a, s.conclusion, asg)) ok = false;
  });
  return ok;
}

inline bool models(const FiniteStructure& a, const Theory& t) {
  return std::all_of(t.axioms().begin(), t.axioms().end(), [&](const Axiom& ax) { return holds(a, ax.sentence); });
}

// All models of a theory over {S/2} with exactly n elements, up to isomorphism.
inline std::vector<FiniteStructure> digraph_models(const Theory& t, int n) {
  std::vector<Tuple> cells;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) cells.push_back({x, y});
  std::vector<FiniteStructure> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells.size()); ++mask) {
    std::vector<Tuple> table;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (mask >> i & 1) table.push_back(cells[i]);
    FiniteStructure s(t.signature(), n, {table}, {});
    if (!models(s, t)) continue;
    if (std::none_of(out.begin(), out.end(), [&](const FiniteStructure& o) { return isomorphic(o, s); }))
      out.push_back(s);
  }
  return out;
}

inline FiniteStructure random_digraph(std::mt19937& rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Tuple> table;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (coin(rng)) table.push_back({x, y});
  return FiniteStructure(shapes::digraph_signature(), n, {table}, {});
}

// Positive existential type of every m-tuple, as bitsets over the pp
// patterns of a fragment. Only patterns whose bound variables form one
// component and that avoid equalities on bound variables are kept; every
// other pattern is a conjunction of kept ones up to substitution, so the
// kept ones reflect exactly when all do.
class TypeOracle {
 public:
  TypeOracle(const Signature& sig, FormulaFragment frag) : en_(sig, frag) {
    for (const auto& p : en_.pp_patterns()) {
      if (!en_.bound_connected(p)) continue;
      bool bound_eq = false;
      for (int i : p.atoms) {
        const auto& a = en_.atoms()[i];
        if (a.rel < 0)
          for (int v : a.args)
            if (v >= frag.m) bound_eq = true;
      }
      if (!bound_eq) patterns_.push_back(p);
    }
  }

  std::size_t pattern_count() const { return patterns_.size(); }

  // types[tuple index (lexicographic)][pattern]
  std::vector<std::vector<bool>> types(const FiniteStructure& a) const {
    const int m = en_.fragment().m;
    std::size_t tuples = 1;
    for (int i = 0; i < m; ++i) tuples *= static_cast<std::size_t>(a.size());
    std::vector<std::vector<bool>> out(tuples, std::vector<bool>(patterns_.size(), false));
    for (std::size_t p = 0; p < patterns_.size(); ++p) {
      ConjunctiveQuery q = en_.query(patterns_[p]);
      QuerySolver solver(q, std::vector<bool>(static_cast<std::size_t>(q.num_vars), false));
      std::vector<Element> values(static_cast<std::size_t>(q.num_vars), 0);
      solver.solve(a, values, [&](const std::vector<Element>& v) {
        std::size_t idx = 0;
        for (int i = 0; i < m; ++i) idx = idx * static_cast<std::size_t>(a.size()) + static_cast<std::size_t>(v[i]);
        out[idx][p] = true;
        return true;
      });
    }
    return out;
  }

  // f reflects every kept pattern on every m-tuple of A.
  bool immersion(const FiniteStructure& a, const std::vector<std::vector<bool>>& ta, const FiniteStructure& b,
                 const std::vector<std::vector<bool>>& tb, const ElementMap& f) const {
    const int m = en_.fragment().m;
    bool ok = true;
    for_each_map(m, a.size(), [&](const ElementMap& tuple) {
      if (!ok) return;
      std::size_t ia = 0;
      std::size_t ib = 0;
      for (int i = 0; i < m; ++i) {
        ia = ia * static_cast<std::size_t>(a.size()) + static_cast<std::size_t>(tuple[i]);
        ib = ib * static_cast<std::size_t>(b.size()) + static_cast<std::size_t>(f[tuple[i]]);
      }
      for (std::size_t p = 0; p < patterns_.size(); ++p)
        if (tb[ib][p] && !ta[ia][p]) ok = false;
    });
    return ok;
  }

 private:
  FragmentEnumerator en_;
  std::vector<PPPattern> patterns_;
};

// First balanced s-expression in `text` starting with "(head".
inline std::string extract(const std::string& text, const std::string& head, std::size_t from = 0) {
  std::size_t start = text.find("(" + head, from);
  if (start == std::string::npos) return {};
  int depth = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')' && --depth == 0) return text.substr(start, i - start + 1);
  }
  return {};
}

}  // namespace oracle
