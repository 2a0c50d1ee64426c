#include "posmod/theory.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace posmod {

Theory::Theory(std::string name, Signature sig, std::vector<Axiom> axioms)
    : name_(std::move(name)), sig_(std::move(sig)), axioms_(std::move(axioms)) {
  std::set<std::string> labels;
  for (const auto& a : axioms_) {
    if (!labels.insert(a.label).second) throw std::invalid_argument("duplicate axiom label '" + a.label + "'");
    check_closed(a.sentence);
  }
}

Theory Theory::with_axioms(const std::vector<Axiom>& extra, std::string name) const {
  auto all = axioms_;
  all.insert(all.end(), extra.begin(), extra.end());
  return Theory(name.empty() ? name_ : std::move(name), sig_, std::move(all));
}

void check_closed(const HInductiveSentence& s) {
  for (const auto* f : {&s.premise, &s.conclusion}) {
    for (const auto& v : f->free_variables()) {
      if (std::find(s.vars.begin(), s.vars.end(), v) == s.vars.end()) {
        throw std::invalid_argument("sentence is not closed: variable '" + v + "' is free");
      }
    }
  }
}

HInductiveSentence parse_sentence(const SExpr& e, const Signature& sig) {
  HInductiveSentence out;
  if (e.has_head("not")) {
    if (e.items.size() != 2) e.fail("expected (not formula)");
    out.premise = parse_formula(e.items[1], sig);
    out.conclusion = PositiveFormula::falsity();
  } else if (e.has_head("forall")) {
    if (e.items.size() != 3 || !e.items[1].is_list()) e.fail("expected (forall (VAR*) (=> premise conclusion))");
    for (const auto& v : e.items[1].items) {
      if (!v.is_atom() || sig.has_symbol(v.atom)) v.fail("invalid universal variable");
      if (std::find(out.vars.begin(), out.vars.end(), v.atom) != out.vars.end()) {
        v.fail("variable '" + v.atom + "' bound twice");
      }
      out.vars.push_back(v.atom);
    }
    const SExpr& imp = e.items[2];
    if (!imp.has_head("=>") || imp.items.size() != 3) imp.fail("expected (=> premise conclusion)");
    out.premise = parse_formula(imp.items[1], sig);
    out.conclusion = parse_formula(imp.items[2], sig);
  } else {
    e.fail("expected a sentence: (forall (VARS) (=> f f)) or (not f)");
  }
  try {
    check_closed(out);
  } catch (const std::invalid_argument& err) {
    e.fail(err.what());
  }
  return out;
}

HInductiveSentence parse_sentence(std::string_view text, const Signature& sig) {
  return parse_sentence(read_sexpr(text), sig);
}

Theory parse_theory(std::string_view text) {
  const SExpr root = read_sexpr(text);
  if (!root.has_head("theory") || root.items.size() < 3) root.fail("expected (theory NAME (sig ...) (axiom ...)*)");
  const SExpr& name = root.items[1];
  if (!name.is_atom()) name.fail("theory name must be an atom");
  const SExpr& sigexpr = root.items[2];
  if (!sigexpr.has_head("sig")) sigexpr.fail("expected (sig ...)");
  std::vector<RelationSymbol> rels;
  std::vector<std::string> consts;
  for (std::size_t i = 1; i < sigexpr.items.size(); ++i) {
    const SExpr& d = sigexpr.items[i];
    if (d.has_head("rel")) {
      if (d.items.size() != 3 || !d.items[1].is_atom()) d.fail("expected (rel NAME ARITY)");
      rels.push_back({d.items[1].atom, atom_to_int(d.items[2])});
    } else if (d.has_head("const")) {
      if (d.items.size() != 2 || !d.items[1].is_atom()) d.fail("expected (const NAME)");
      consts.push_back(d.items[1].atom);
    } else {
      d.fail("expected (rel NAME ARITY) or (const NAME)");
    }
  }
  Signature sig;
  try {
    sig = Signature(std::move(rels), std::move(consts));
  } catch (const std::invalid_argument& err) {
    sigexpr.fail(err.what());
  }
  std::vector<Axiom> axioms;
  std::set<std::string> labels;
  for (std::size_t i = 3; i < root.items.size(); ++i) {
    const SExpr& a = root.items[i];
    if (!a.has_head("axiom") || a.items.size() != 3 || !a.items[1].is_atom()) a.fail("expected (axiom LABEL sentence)");
    if (!labels.insert(a.items[1].atom).second) a.items[1].fail("duplicate axiom label '" + a.items[1].atom + "'");
    axioms.push_back({a.items[1].atom, parse_sentence(a.items[2], sig)});
  }
  return Theory(name.atom, std::move(sig), std::move(axioms));
}

std::string to_string(const HInductiveSentence& s) {
  if (s.vars.empty() && s.is_h_universal()) return "(not " + to_string(s.premise) + ")";
  std::string out = "(forall (";
  for (std::size_t i = 0; i < s.vars.size(); ++i) {
    if (i) out += ' ';
    out += s.vars[i];
  }
  return out + ") (=> " + to_string(s.premise) + " " + to_string(s.conclusion) + "))";
}

std::string serialize(const Theory& t) {
  std::string out = "(theory " + t.name() + "\n  (sig";
  for (const auto& r : t.signature().relations()) out += " (rel " + r.name + " " + std::to_string(r.arity) + ")";
  for (const auto& c : t.signature().constants()) out += " (const " + c + ")";
  out += ")";
  for (const auto& a : t.axioms()) out += "\n  (axiom " + a.label + " " + to_string(a.sentence) + ")";
  return out + ")\n";
}

std::uint64_t theory_hash(const Theory& t) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize(t)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace posmod
