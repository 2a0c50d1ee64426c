#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "formula_table.hpp"
#include "posmod/analysis.hpp"
#include "posmod/canonical.hpp"
#include "posmod/normal_form.hpp"

namespace posmod {

using detail::Bits;

namespace {

std::string pp_keys(const PositiveFormula& closed, const Signature& sig) {
  std::vector<std::string> keys;
  for (const auto& pp : pp_normal_form(closed)) keys.push_back(canonical_form(canonical_structure(pp, {}, sig).structure));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::string out = "{";
  for (const auto& k : keys) out += k + ";";
  return out + "}";
}

int var_index(const std::string& name) { return std::stoi(name.substr(1)); }

}  // namespace

std::string sentence_key(const HInductiveSentence& s, const Signature& sig) {
  if (s.is_h_universal()) return "U" + pp_keys(PositiveFormula::exists(s.vars, s.premise), sig);
  std::vector<std::string> used;
  for (const auto& f : {s.premise, s.conclusion})
    for (const auto& v : f.free_variables())
      if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
  std::vector<std::string> consts;
  for (std::size_t i = 0; i < used.size(); ++i) consts.push_back("#u" + std::to_string(i));
  Signature ext = sig.with_constants(consts);
  std::vector<std::size_t> perm(used.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::vector<std::pair<std::string, Term>> subst;
    for (std::size_t i = 0; i < used.size(); ++i) subst.emplace_back(used[i], Term::constant(consts[perm[i]]));
    std::string key = "I" + pp_keys(substitute(s.premise, subst), ext) + "=>" + pp_keys(substitute(s.conclusion, subst), ext);
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool SentenceSet::contains(const HInductiveSentence& s, const Signature& sig) const {
  std::string key = sentence_key(s, sig);
  return std::any_of(sentences.begin(), sentences.end(),
                     [&](const HInductiveSentence& t) { return sentence_key(t, sig) == key; });
}

namespace {

std::vector<HInductiveSentence> sentences_true_in(const std::vector<const FiniteStructure*>& structures,
                                                  const Signature& sig, const FormulaFragment& frag,
                                                  SentenceKind kind) {
  FragmentEnumerator en(sig, frag);
  detail::Slots slots(structures, frag.m);
  detail::FormulaTable table(en, slots);
  const auto formulas = en.all();
  std::vector<Bits> bits;
  bits.reserve(formulas.size());
  for (const auto& f : formulas) bits.push_back(table.of(f));

  std::vector<HInductiveSentence> out;
  std::set<std::string> seen;
  auto add = [&](HInductiveSentence s) {
    if (seen.insert(sentence_key(s, sig)).second) out.push_back(std::move(s));
  };
  auto sorted_vars = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return var_index(a) < var_index(b); });
    return v;
  };

  for (std::size_t i = 0; i < formulas.size(); ++i) {
    if (formulas[i].kind == FragmentFormula::Kind::Falsity) continue;
    if (std::any_of(bits[i].begin(), bits[i].end(), [](auto w) { return w != 0; })) continue;
    PositiveFormula f = en.to_formula(formulas[i]);
    add({{}, PositiveFormula::exists(sorted_vars(f.free_variables()), f), PositiveFormula::falsity()});
  }
  if (kind == SentenceKind::HUniversal) return out;

  std::vector<std::string> names;
  for (int i = 1; i <= frag.m; ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t p = 0; p < formulas.size(); ++p) {
    const auto& phi = formulas[p];
    if (phi.kind == FragmentFormula::Kind::Falsity || !phi.is_quantifier_free()) continue;
    if (std::all_of(bits[p].begin(), bits[p].end(), [](auto w) { return w == 0; })) continue;
    PositiveFormula premise = en.to_formula(phi);
    // phi -> psi is valid when psi holds in the canonical structure of phi
    std::vector<CanonicalQuery> canon;
    for (const auto& pp : pp_normal_form(premise)) canon.push_back(canonical_structure(pp, names, sig));
    for (std::size_t c = 0; c < formulas.size(); ++c) {
      const auto& psi = formulas[c];
      if (psi.kind == FragmentFormula::Kind::Truth || psi.kind == FragmentFormula::Kind::Falsity) continue;
      if (!detail::subset_of(bits[p], bits[c])) continue;
      bool valid = std::all_of(canon.begin(), canon.end(),
                               [&](const CanonicalQuery& q) { return en.holds(q.structure, psi, q.tuple); });
      if (valid) continue;
      PositiveFormula conclusion = en.to_formula(psi);
      std::vector<std::string> vars = premise.free_variables();
      for (const auto& v : conclusion.free_variables())
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
      add({sorted_vars(vars), premise, conclusion});
    }
  }
  return out;
}

}  // namespace

std::vector<HInductiveSentence> theory_of(const FiniteStructure& m, const FormulaFragment& frag, SentenceKind kind,
                                          bool with_params) {
  if (!with_params) return sentences_true_in({&m}, m.signature(), frag, kind);
  std::vector<std::string> params;
  std::vector<Element> values = m.constant_values();
  for (int e = 0; e < m.size(); ++e) {
    std::string name = "c" + std::to_string(e);
    if (m.signature().has_symbol(name)) throw std::invalid_argument("parameter name " + name + " is already a symbol");
    params.push_back(name);
    values.push_back(e);
  }
  Signature sig = m.signature().with_constants(params);
  std::vector<std::vector<Tuple>> tables;
  for (std::size_t r = 0; r < sig.relations().size(); ++r) tables.push_back(m.table(r));
  FiniteStructure expanded(sig, m.size(), tables, values);
  return sentences_true_in({&expanded}, sig, frag, kind);
}

namespace {

SentenceSet pc_sentences(const ModelUniverse& u, const FormulaFragment& frag, SentenceKind kind) {
  auto pcs = pc_members(u);
  if (pcs.empty()) return {Verdict::inconclusive(u.bound(), "no pc member within the bound"), {}};
  std::vector<const FiniteStructure*> structures;
  for (auto i : pcs) structures.push_back(&u[i]);
  return {Verdict::holds_within(u.bound()), sentences_true_in(structures, u.theory().signature(), frag, kind)};
}

}  // namespace

SentenceSet kaiser_hull(const ModelUniverse& u, const FormulaFragment& frag) {
  return pc_sentences(u, frag, SentenceKind::HInductive);
}

SentenceSet universal_companion(const ModelUniverse& u, const FormulaFragment& frag) {
  return pc_sentences(u, frag, SentenceKind::HUniversal);
}

Verdict companion_check(const Theory& t1, const Theory& t2, int n, const FinderOptions& opt) {
  if (t1.signature() != t2.signature()) throw SignatureMismatch("companion check needs equal signatures");
  if (serialize(t1) == serialize(t2)) return Verdict::holds();
  ModelUniverse u1 = enumerate_models(t1, n, opt);
  ModelUniverse u2 = enumerate_models(t2, n, opt);
  auto key = [](const ModelUniverse& u, std::size_t i) { return std::make_pair(u[i].size(), u.code(i)); };
  std::map<std::pair<int, std::string>, int> side;  // 1 = only t1, 2 = only t2, 3 = both
  std::map<std::pair<int, std::string>, const FiniteStructure*> rep;
  for (auto i : pc_members(u1)) {
    side[key(u1, i)] |= 1;
    rep[key(u1, i)] = &u1[i];
  }
  for (auto i : pc_members(u2)) {
    side[key(u2, i)] |= 2;
    rep[key(u2, i)] = &u2[i];
  }
  for (const auto& [k, s] : side) {
    if (s == 3) continue;
    const Theory& has = s == 1 ? t1 : t2;
    const Theory& lacks = s == 1 ? t2 : t1;
    return Verdict::fails(serialize(*rep[k]) + " is a pc model of " + has.name() + " but not of " + lacks.name());
  }
  return Verdict::holds_within(n);
}

}  // namespace posmod
