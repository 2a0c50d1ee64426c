#include "posmod/morphisms.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "posmod/normal_form.hpp"
#include "posmod/semantics.hpp"

namespace posmod {

HomPattern pattern_of(const FiniteStructure& a) {
  HomPattern p;
  p.num_vars = a.size();
  for (std::size_t r = 0; r < a.signature().relations().size(); ++r)
    for (const auto& t : a.table(r)) p.constraints.emplace_back(static_cast<int>(r), std::vector<int>(t.begin(), t.end()));
  for (std::size_t c = 0; c < a.constant_values().size(); ++c) p.constant_vars.emplace_back(a.constant_value(c), c);
  return p;
}

PushoutPattern pushout_pattern(const FiniteStructure& b, const FiniteStructure& c, std::span<const Element> f,
                               std::span<const Element> g, int a_size) {
  const int nb = b.size();
  const int n = nb + c.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int x = 0; x < a_size; ++x) {
    int u = find(f[x]);
    int v = find(nb + g[x]);
    if (u != v) parent[std::max(u, v)] = std::min(u, v);
  }
  std::vector<int> cls(n, -1);
  int count = 0;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (cls[r] < 0) cls[r] = count++;
    cls[i] = cls[r];
  }
  PushoutPattern out;
  out.pattern.num_vars = count;
  for (int i = 0; i < nb; ++i) out.b_var.push_back(cls[i]);
  for (int i = nb; i < n; ++i) out.c_var.push_back(cls[i]);
  auto add = [&](const FiniteStructure& s, const std::vector<int>& var) {
    for (std::size_t r = 0; r < s.signature().relations().size(); ++r) {
      for (const auto& t : s.table(r)) {
        std::vector<int> vs;
        for (Element e : t) vs.push_back(var[e]);
        out.pattern.constraints.emplace_back(static_cast<int>(r), std::move(vs));
      }
    }
    for (std::size_t k = 0; k < s.constant_values().size(); ++k)
      out.pattern.constant_vars.emplace_back(var[s.constant_value(k)], k);
  };
  add(b, out.b_var);
  add(c, out.c_var);
  return out;
}

namespace {

class HomSearch {
 public:
  HomSearch(const HomPattern& p, const FiniteStructure& target, std::size_t limit)
      : p_(p), t_(target), limit_(limit), n_(target.size()) {
    if (n_ > 64) throw std::invalid_argument("homomorphism search supports targets of at most 64 elements");
    occurs_.resize(p.num_vars);
    for (std::size_t c = 0; c < p.constraints.size(); ++c) {
      for (int v : p.constraints[c].second) {
        auto& occ = occurs_[v];
        if (occ.empty() || occ.back() != static_cast<int>(c)) occ.push_back(static_cast<int>(c));
      }
    }
    order_.resize(p.num_vars);
    std::iota(order_.begin(), order_.end(), 0);
    if (limit == kAllHoms) {
      std::stable_sort(order_.begin(), order_.end(),
                       [&](int x, int y) { return occurs_[x].size() > occurs_[y].size(); });
    }
  }

  std::vector<ElementMap> run() {
    const std::uint64_t full = n_ == 64 ? ~0ULL : ((1ULL << n_) - 1);
    std::vector<std::uint64_t> dom(p_.num_vars, full);
    std::vector<bool> pinned(p_.num_vars, false);
    for (auto [v, c] : p_.constant_vars) dom[v] &= 1ULL << t_.constant_value(c);
    for (int v = 0; v < static_cast<int>(p_.pins.size()); ++v) {
      if (p_.pins[v] < 0) continue;
      if (p_.pins[v] >= n_) throw std::invalid_argument("pin outside the target universe");
      dom[v] &= 1ULL << p_.pins[v];
      pinned[v] = true;
    }
    // A constraint over pinned variables only that fails is a pin error.
    Tuple buf;
    for (const auto& [rel, vars] : p_.constraints) {
      if (!std::all_of(vars.begin(), vars.end(), [&](int v) { return pinned[v]; })) continue;
      buf.clear();
      for (int v : vars) buf.push_back(p_.pins[v]);
      if (!t_.holds(rel, buf)) throw std::invalid_argument("inconsistent pins: the pinned images violate an atom");
    }
    values_.assign(p_.num_vars, -1);
    if (std::all_of(dom.begin(), dom.end(), [](std::uint64_t d) { return d != 0; })) {
      // Singleton domains propagate before the first decision.
      if (propagate_all(dom)) descend(0, dom);
    }
    if (limit_ == kAllHoms) std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  const HomPattern& p_;
  const FiniteStructure& t_;
  std::size_t limit_;
  int n_;
  std::vector<std::vector<int>> occurs_;
  std::vector<int> order_;
  std::vector<Element> values_;
  std::vector<ElementMap> out_;
  Tuple scratch_;

  bool holds(int c) {
    const auto& [rel, vars] = p_.constraints[c];
    scratch_.resize(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) scratch_[i] = values_[vars[i]];
    return t_.holds(rel, scratch_);
  }

  // Forward checking on constraint c after an assignment.
  bool revise(int c, std::vector<std::uint64_t>& dom) {
    const auto& vars = p_.constraints[c].second;
    int open = -1;
    for (int v : vars) {
      if (values_[v] >= 0) continue;
      if (open >= 0 && open != v) return true;  // two or more open variables
      open = v;
    }
    if (open < 0) return holds(c);
    std::uint64_t keep = 0;
    for (std::uint64_t d = dom[open]; d; d &= d - 1) {
      const int e = std::countr_zero(d);
      values_[open] = e;
      if (holds(c)) keep |= 1ULL << e;
    }
    values_[open] = -1;
    dom[open] = keep;
    return keep != 0;
  }

  bool propagate_all(std::vector<std::uint64_t>& dom) {
    // Only constraints with at most one variable of non-singleton domain can prune here.
    for (std::size_t c = 0; c < p_.constraints.size(); ++c) {
      const auto& vars = p_.constraints[c].second;
      int open = -1;
      bool many = false;
      for (int v : vars) {
        if (std::popcount(dom[v]) == 1) continue;
        if (open >= 0 && open != v) many = true;
        open = v;
      }
      if (many) continue;
      for (int v : vars)
        if (std::popcount(dom[v]) == 1) values_[v] = std::countr_zero(dom[v]);
      bool ok = revise(static_cast<int>(c), dom);
      for (int v : vars) values_[v] = -1;
      if (!ok) return false;
    }
    return true;
  }

  bool descend(std::size_t depth, std::vector<std::uint64_t>& dom) {
    if (depth == order_.size()) {
      out_.push_back(values_);
      return out_.size() < limit_;
    }
    const int v = order_[depth];
    for (std::uint64_t d = dom[v]; d; d &= d - 1) {
      const int e = std::countr_zero(d);
      values_[v] = e;
      std::vector<std::uint64_t> next = dom;
      next[v] = 1ULL << e;
      bool ok = true;
      for (int c : occurs_[v]) {
        if (!revise(c, next)) {
          ok = false;
          break;
        }
      }
      if (ok && !descend(depth + 1, next)) {
        values_[v] = -1;
        return false;
      }
    }
    values_[v] = -1;
    return true;
  }
};

void require_same_signature(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("structures have different signatures");
}

}  // namespace

std::vector<ElementMap> solve_pattern(const HomPattern& p, const FiniteStructure& target, std::size_t limit) {
  if (limit == 0) return {};
  return HomSearch(p, target, limit).run();
}

std::vector<ElementMap> find_homomorphisms(const FiniteStructure& a, const FiniteStructure& b,
                                           std::span<const Element> pins, std::size_t limit) {
  require_same_signature(a, b);
  HomPattern p = pattern_of(a);
  if (!pins.empty()) {
    if (static_cast<int>(pins.size()) > a.size()) throw std::invalid_argument("more pins than source elements");
    p.pins.assign(pins.begin(), pins.end());
    p.pins.resize(a.size(), -1);
  }
  return solve_pattern(p, b, limit);
}

std::optional<ElementMap> first_homomorphism(const FiniteStructure& a, const FiniteStructure& b,
                                             std::span<const Element> pins) {
  auto r = find_homomorphisms(a, b, pins, 1);
  if (r.empty()) return std::nullopt;
  return r.front();
}

std::size_t count_homomorphisms(const FiniteStructure& a, const FiniteStructure& b) {
  return find_homomorphisms(a, b).size();
}

bool is_homomorphism(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> map) {
  require_same_signature(a, b);
  if (static_cast<int>(map.size()) != a.size()) return false;
  for (Element e : map)
    if (e < 0 || e >= b.size()) return false;
  for (std::size_t c = 0; c < a.constant_values().size(); ++c)
    if (map[a.constant_value(c)] != b.constant_value(c)) return false;
  Tuple img;
  for (std::size_t r = 0; r < a.signature().relations().size(); ++r) {
    for (const auto& t : a.table(r)) {
      img.clear();
      for (Element e : t) img.push_back(map[e]);
      if (!b.holds(r, img)) return false;
    }
  }
  return true;
}

ElementMap compose(std::span<const Element> first, std::span<const Element> second) {
  ElementMap out;
  for (Element e : first) out.push_back(second[e]);
  return out;
}

ElementMap identity_map(int n) {
  ElementMap m(n);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

EmbeddingCheck check_embedding(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> f) {
  require_same_signature(a, b);
  for (Element x = 0; x < a.size(); ++x)
    for (Element y = x + 1; y < a.size(); ++y)
      if (f[x] == f[y]) return {false, "merge " + std::to_string(x) + " " + std::to_string(y)};
  const auto& rels = a.signature().relations();
  Tuple t;
  Tuple img;
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const int arity = rels[r].arity;
    t.assign(arity, 0);
    img.resize(arity);
    for (;;) {
      for (int i = 0; i < arity; ++i) img[i] = f[t[i]];
      if (b.holds(r, img) && !a.holds(r, t)) return {false, "reflect " + rels[r].name + format_tuple(t)};
      int i = arity - 1;
      while (i >= 0 && t[i] == a.size() - 1) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
  }
  return {};
}

ImmersionCheck check_immersion(const FiniteStructure& a, const FiniteStructure& b, std::span<const Element> f,
                               bool want_formula) {
  require_same_signature(a, b);
  ImmersionCheck out;
  std::vector<Element> pins(b.size(), -1);
  bool consistent = true;
  for (Element x = 0; x < a.size(); ++x) {
    if (pins[f[x]] >= 0 && pins[f[x]] != x) consistent = false;
    pins[f[x]] = x;
  }
  if (consistent) {
    HomPattern p = pattern_of(b);
    p.pins = pins;
    std::vector<ElementMap> g;
    try {
      g = solve_pattern(p, a, 1);
    } catch (const std::invalid_argument&) {
      // Pinned atoms already fail: no retraction.
    }
    if (!g.empty()) {
      out.retraction = g.front();
      return out;
    }
  }
  out.holds = false;
  if (want_formula) {
    auto [phi, args] = distinguishing_formula(a, b, f);
    out.formula = phi;
    out.formula_args = args;
  }
  return out;
}

std::pair<PositiveFormula, std::vector<Element>> distinguishing_formula(const FiniteStructure& a,
                                                                        const FiniteStructure& b,
                                                                        std::span<const Element> f) {
  const auto& sig = b.signature();
  const int na = a.size();
  std::vector<Term> term(b.size());
  std::vector<bool> named(b.size(), false);
  std::vector<PositiveFormula> eqs;
  auto xname = [](Element x) { return "x" + std::to_string(x); };
  for (Element x = 0; x < na; ++x) {
    const Element e = f[x];
    if (!named[e]) {
      term[e] = Term::var(xname(x));
      named[e] = true;
    } else {
      eqs.push_back(PositiveFormula::equality(term[e], Term::var(xname(x))));
    }
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    const Element e = b.constant_value(c);
    const Term ct = Term::constant(sig.constants()[c]);
    if (!named[e]) {
      term[e] = ct;
      named[e] = true;
    } else {
      eqs.push_back(PositiveFormula::equality(term[e], ct));
    }
  }
  std::vector<std::string> bound;
  for (Element e = 0; e < b.size(); ++e) {
    if (named[e]) continue;
    term[e] = Term::var("z" + std::to_string(e));
    bound.push_back(term[e].name);
  }
  std::vector<PositiveFormula> atoms;
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    for (const auto& t : b.table(r)) {
      std::vector<Term> args;
      for (Element e : t) args.push_back(term[e]);
      atoms.push_back(PositiveFormula::atom(sig.relations()[r].name, std::move(args)));
    }
  }
  atoms.insert(atoms.end(), eqs.begin(), eqs.end());

  std::vector<std::string> free_names;
  std::vector<Element> tuple;
  for (Element x = 0; x < na; ++x) {
    free_names.push_back(xname(x));
    tuple.push_back(x);
  }
  auto true_in_a = [&](const std::vector<PositiveFormula>& body) {
    PPFormula pp{bound, body};
    auto q = compile_pp(pp, free_names, sig);
    std::vector<bool> pinned(q.num_vars, false);
    std::vector<Element> values(q.num_vars, 0);
    for (int i = 0; i < na; ++i) {
      pinned[i] = true;
      values[i] = tuple[i];
    }
    return QuerySolver(q, pinned).satisfiable(a, values);
  };
  if (true_in_a(atoms)) throw std::logic_error("distinguishing_formula: a retraction exists");
  for (std::size_t i = 0; i < atoms.size();) {
    auto trial = atoms;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (!true_in_a(trial)) {
      atoms = std::move(trial);
    } else {
      ++i;
    }
  }
  // Keep bound variables that still occur, renamed y1, y2, ... by first use.
  PositiveFormula body = PositiveFormula::conj(atoms);
  std::vector<std::string> occurring = body.free_variables();
  std::vector<std::pair<std::string, Term>> rename;
  std::vector<std::string> new_bound;
  std::vector<Element> args;
  for (const auto& v : occurring) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) {
      new_bound.push_back("y" + std::to_string(new_bound.size() + 1));
      rename.emplace_back(v, Term::var(new_bound.back()));
    } else {
      args.push_back(std::stoi(v.substr(1)));
    }
  }
  body = substitute(body, rename);
  return {PositiveFormula::exists(new_bound, body), args};
}

TypeCheck tp_leq(const FiniteStructure& a, std::span<const Element> at, const FiniteStructure& b,
                 std::span<const Element> bt) {
  if (at.size() != bt.size()) throw std::invalid_argument("tuples of different lengths");
  require_same_signature(a, b);
  std::vector<Element> pins(a.size(), -1);
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (pins[at[i]] >= 0 && pins[at[i]] != bt[i]) return {};
    pins[at[i]] = bt[i];
  }
  std::vector<ElementMap> r;
  try {
    r = find_homomorphisms(a, b, pins, 1);
  } catch (const std::invalid_argument&) {
    return {};
  }
  if (r.empty()) return {};
  return {true, r.front()};
}

bool tpqf_leq(const FiniteStructure& a, std::span<const Element> at, const FiniteStructure& b,
              std::span<const Element> bt) {
  if (at.size() != bt.size()) throw std::invalid_argument("tuples of different lengths");
  require_same_signature(a, b);
  auto sa = tpqf(a, at);
  auto sb = tpqf(b, bt);
  return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

}  // namespace posmod
