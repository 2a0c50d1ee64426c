#include "posmod/normal_form.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace posmod {

namespace {

struct PPBuilder {
  std::set<std::string> used;
  std::vector<std::pair<std::string, std::string>> renames;

  std::string fresh(const std::string& v) {
    if (used.insert(v).second) return v;
    for (int k = 1;; ++k) {
      std::string cand = v + "_" + std::to_string(k);
      if (used.insert(cand).second) return cand;
    }
  }

  Term map_term(const Term& t) const {
    if (!t.is_variable()) return t;
    for (auto it = renames.rbegin(); it != renames.rend(); ++it)
      if (it->first == t.name) return Term::var(it->second);
    return t;
  }

  std::vector<PPFormula> run(const PositiveFormula& f) {
    using K = PositiveFormula::Kind;
    switch (f.kind()) {
      case K::Truth:
        return {PPFormula{}};
      case K::Falsity:
        return {};
      case K::Atom: {
        std::vector<Term> args;
        for (const auto& t : f.args()) args.push_back(map_term(t));
        return {PPFormula{{}, {PositiveFormula::atom(f.relation(), std::move(args))}}};
      }
      case K::Equality:
        return {PPFormula{{}, {PositiveFormula::equality(map_term(f.args()[0]), map_term(f.args()[1]))}}};
      case K::Or: {
        std::vector<PPFormula> out;
        for (const auto& c : f.children()) {
          auto part = run(c);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      }
      case K::And: {
        std::vector<PPFormula> acc{PPFormula{}};
        for (const auto& c : f.children()) {
          auto part = run(c);
          std::vector<PPFormula> next;
          for (const auto& x : acc) {
            for (const auto& y : part) {
              PPFormula z = x;
              z.bound.insert(z.bound.end(), y.bound.begin(), y.bound.end());
              z.atoms.insert(z.atoms.end(), y.atoms.begin(), y.atoms.end());
              next.push_back(std::move(z));
            }
          }
          acc = std::move(next);
        }
        return acc;
      }
      case K::Exists: {
        std::vector<std::string> names;
        for (const auto& v : f.bound()) {
          names.push_back(fresh(v));
          renames.emplace_back(v, names.back());
        }
        auto inner = run(f.body());
        renames.resize(renames.size() - names.size());
        for (auto& pp : inner) pp.bound.insert(pp.bound.begin(), names.begin(), names.end());
        return inner;
      }
    }
    return {};
  }
};

}  // namespace

std::vector<PPFormula> pp_normal_form(const PositiveFormula& f) {
  PPBuilder b;
  for (const auto& v : f.free_variables()) b.used.insert(v);
  return b.run(f);
}

PositiveFormula to_formula(const PPFormula& pp) { return PositiveFormula::exists(pp.bound, PositiveFormula::conj(pp.atoms)); }

ConjunctiveQuery compile_pp(const PPFormula& pp, const std::vector<std::string>& free_vars, const Signature& sig) {
  ConjunctiveQuery q;
  std::vector<std::string> names = free_vars;
  names.insert(names.end(), pp.bound.begin(), pp.bound.end());
  q.num_vars = static_cast<int>(names.size());
  auto index = [&](const Term& t) -> int {
    if (!t.is_variable()) {
      auto c = sig.constant_index(t.name);
      if (!c) throw SignatureMismatch("unknown constant '" + t.name + "'");
      return -static_cast<int>(*c) - 1;
    }
    // Bound names shadow free ones; search from the back.
    for (int i = q.num_vars - 1; i >= 0; --i)
      if (names[i] == t.name) return i;
    throw std::invalid_argument("unassigned free variable '" + t.name + "'");
  };
  for (const auto& a : pp.atoms) {
    QueryAtom qa;
    if (a.kind() == PositiveFormula::Kind::Atom) {
      auto r = sig.relation_index(a.relation());
      if (!r || sig.relations()[*r].arity != static_cast<int>(a.args().size())) {
        throw SignatureMismatch("relation '" + a.relation() + "' is not in the signature");
      }
      qa.rel = static_cast<int>(*r);
    }
    for (const auto& t : a.args()) qa.args.push_back(index(t));
    q.atoms.push_back(std::move(qa));
  }
  return q;
}

CanonicalQuery canonical_structure(const PPFormula& pp, const std::vector<std::string>& free_vars,
                                   const Signature& sig) {
  const auto q = compile_pp(pp, free_vars, sig);
  const int nv = q.num_vars;
  const int nc = static_cast<int>(sig.constants().size());
  // Nodes 0..nv-1 are variables, nv + c is constant c.
  std::vector<int> parent(nv + nc);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto node = [&](int arg) { return arg >= 0 ? arg : nv + (-arg - 1); };
  for (const auto& a : q.atoms) {
    if (a.rel >= 0) continue;
    int x = find(node(a.args[0]));
    int y = find(node(a.args[1]));
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  std::vector<int> cls(nv + nc, -1);
  int count = 0;
  for (int i = 0; i < nv + nc; ++i) {
    int r = find(i);
    if (cls[r] < 0) cls[r] = count++;
    cls[i] = cls[r];
  }
  if (count == 0) count = 1;
  std::vector<std::vector<Tuple>> tables(sig.relations().size());
  for (const auto& a : q.atoms) {
    if (a.rel < 0) continue;
    Tuple t;
    for (int arg : a.args) t.push_back(cls[node(arg)]);
    tables[a.rel].push_back(std::move(t));
  }
  std::vector<Element> consts;
  for (int c = 0; c < nc; ++c) consts.push_back(cls[nv + c]);
  Tuple tuple;
  for (std::size_t i = 0; i < free_vars.size(); ++i) tuple.push_back(cls[i]);
  return {FiniteStructure(sig, count, std::move(tables), std::move(consts)), std::move(tuple)};
}

AtomSet tpqf(const FiniteStructure& a, std::span<const Element> tuple) {
  const int m = static_cast<int>(tuple.size());
  const int nc = static_cast<int>(a.signature().constants().size());
  const int nt = m + nc;
  auto value = [&](int t) { return t < m ? tuple[t] : a.constant_value(static_cast<std::size_t>(t - m)); };
  AtomSet out;
  const auto& rels = a.signature().relations();
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const int arity = rels[r].arity;
    std::vector<int> terms(arity, 0);
    Tuple args(arity);
    if (nt == 0) break;
    for (;;) {
      for (int i = 0; i < arity; ++i) args[i] = value(terms[i]);
      if (a.holds(r, args)) out.push_back({static_cast<int>(r), terms});
      int i = arity - 1;
      while (i >= 0 && terms[i] == nt - 1) terms[i--] = 0;
      if (i < 0) break;
      ++terms[i];
    }
  }
  for (int s = 0; s < nt; ++s)
    for (int t = s; t < nt; ++t)
      if (value(s) == value(t)) out.push_back({-1, {s, t}});
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const AtomSet& atoms, const Signature& sig, int tuple_length) {
  auto term = [&](int t) {
    return t < tuple_length ? "p" + std::to_string(t + 1) : sig.constants()[static_cast<std::size_t>(t - tuple_length)];
  };
  std::string out = "{";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ", ";
    const auto& a = atoms[i];
    if (a.rel < 0) {
      out += term(a.args[0]) + "=" + term(a.args[1]);
    } else {
      out += sig.relations()[a.rel].name + "(";
      for (std::size_t j = 0; j < a.args.size(); ++j) out += (j ? "," : "") + term(a.args[j]);
      out += ")";
    }
  }
  return out + "}";
}

}  // namespace posmod
