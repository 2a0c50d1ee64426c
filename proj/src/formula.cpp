#include "posmod/formula.hpp"

#include <algorithm>
#include <set>

namespace posmod {

struct PositiveFormula::Node {
  Kind kind = Kind::Truth;
  std::string relation;
  std::vector<Term> args;
  std::vector<PositiveFormula> children;
  std::vector<std::string> bound;
};

namespace {

const std::vector<Term> kNoTerms;
const std::vector<PositiveFormula> kNoChildren;
const std::vector<std::string> kNoNames;
const std::string kNoName;

}  // namespace

PositiveFormula PositiveFormula::truth() {
  static const auto node = std::make_shared<const Node>(Node{Kind::Truth, {}, {}, {}, {}});
  return PositiveFormula(node);
}

PositiveFormula PositiveFormula::falsity() {
  static const auto node = std::make_shared<const Node>(Node{Kind::Falsity, {}, {}, {}, {}});
  return PositiveFormula(node);
}

PositiveFormula PositiveFormula::atom(std::string relation, std::vector<Term> args) {
  return PositiveFormula(std::make_shared<const Node>(Node{Kind::Atom, std::move(relation), std::move(args), {}, {}}));
}

PositiveFormula PositiveFormula::equality(Term lhs, Term rhs) {
  return PositiveFormula(
      std::make_shared<const Node>(Node{Kind::Equality, {}, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

PositiveFormula PositiveFormula::conj(std::vector<PositiveFormula> children) {
  std::vector<PositiveFormula> flat;
  for (auto& c : children) {
    if (c.kind() == Kind::And) {
      flat.insert(flat.end(), c.children().begin(), c.children().end());
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  return PositiveFormula(std::make_shared<const Node>(Node{Kind::And, {}, {}, std::move(flat), {}}));
}

PositiveFormula PositiveFormula::disj(std::vector<PositiveFormula> children) {
  std::vector<PositiveFormula> flat;
  for (auto& c : children) {
    if (c.kind() == Kind::Or) {
      flat.insert(flat.end(), c.children().begin(), c.children().end());
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat.front();
  return PositiveFormula(std::make_shared<const Node>(Node{Kind::Or, {}, {}, std::move(flat), {}}));
}

PositiveFormula PositiveFormula::exists(std::vector<std::string> vars, PositiveFormula body) {
  if (vars.empty()) return body;
  return PositiveFormula(std::make_shared<const Node>(Node{Kind::Exists, {}, {}, {std::move(body)}, std::move(vars)}));
}

PositiveFormula::Kind PositiveFormula::kind() const { return node_->kind; }
const std::string& PositiveFormula::relation() const { return node_->kind == Kind::Atom ? node_->relation : kNoName; }
const std::vector<Term>& PositiveFormula::args() const { return node_->args; }
const std::vector<PositiveFormula>& PositiveFormula::children() const {
  return (node_->kind == Kind::And || node_->kind == Kind::Or) ? node_->children : kNoChildren;
}
const std::vector<std::string>& PositiveFormula::bound() const { return node_->bound; }
const PositiveFormula& PositiveFormula::body() const { return node_->children.front(); }

namespace {

void collect_free(const PositiveFormula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  using K = PositiveFormula::Kind;
  switch (f.kind()) {
    case K::Truth:
    case K::Falsity:
      return;
    case K::Atom:
    case K::Equality:
      for (const auto& t : f.args()) {
        if (!t.is_variable()) continue;
        if (std::find(bound.begin(), bound.end(), t.name) != bound.end()) continue;
        if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
      }
      return;
    case K::And:
    case K::Or:
      for (const auto& c : f.children()) collect_free(c, bound, out);
      return;
    case K::Exists: {
      const std::size_t mark = bound.size();
      bound.insert(bound.end(), f.bound().begin(), f.bound().end());
      collect_free(f.body(), bound, out);
      bound.resize(mark);
      return;
    }
  }
}

}  // namespace

std::vector<std::string> PositiveFormula::free_variables() const {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collect_free(*this, bound, out);
  return out;
}

bool PositiveFormula::is_quantifier_free() const {
  switch (kind()) {
    case Kind::Exists:
      return false;
    case Kind::And:
    case Kind::Or:
      return std::all_of(children().begin(), children().end(), [](const auto& c) { return c.is_quantifier_free(); });
    default:
      return true;
  }
}

int PositiveFormula::atom_count() const {
  switch (kind()) {
    case Kind::Atom:
    case Kind::Equality:
      return 1;
    case Kind::And:
    case Kind::Or: {
      int n = 0;
      for (const auto& c : children()) n += c.atom_count();
      return n;
    }
    case Kind::Exists:
      return body().atom_count();
    default:
      return 0;
  }
}

bool PositiveFormula::operator==(const PositiveFormula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  return node_->relation == other.node_->relation && node_->args == other.node_->args &&
         node_->bound == other.node_->bound && node_->children == other.node_->children;
}

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const PositiveFormula& f) {
  using K = PositiveFormula::Kind;
  switch (f.kind()) {
    case K::Truth:
      return "true";
    case K::Falsity:
      return "false";
    case K::Atom: {
      std::string out = "(" + f.relation();
      for (const auto& t : f.args()) out += " " + t.name;
      return out + ")";
    }
    case K::Equality:
      return "(= " + f.args()[0].name + " " + f.args()[1].name + ")";
    case K::And:
    case K::Or: {
      std::string out = f.kind() == K::And ? "(and" : "(or";
      for (const auto& c : f.children()) out += " " + to_string(c);
      return out + ")";
    }
    case K::Exists: {
      std::string out = "(exists (";
      for (std::size_t i = 0; i < f.bound().size(); ++i) {
        if (i) out += ' ';
        out += f.bound()[i];
      }
      return out + ") " + to_string(f.body()) + ")";
    }
  }
  return {};
}

namespace {

bool valid_variable_name(const std::string& name) {
  static const std::set<std::string> reserved = {"true", "false", "and", "or", "exists", "forall", "not", "=>", "="};
  if (name.empty() || reserved.count(name)) return false;
  return !(name[0] >= '0' && name[0] <= '9');
}

Term parse_term(const SExpr& e, const Signature& sig) {
  if (!e.is_atom()) e.fail("expected a term, found a list");
  if (sig.constant_index(e.atom)) return Term::constant(e.atom);
  if (sig.relation_index(e.atom)) e.fail("relation symbol '" + e.atom + "' used as a term");
  if (!valid_variable_name(e.atom)) e.fail("invalid variable name '" + e.atom + "'");
  return Term::var(e.atom);
}

}  // namespace

PositiveFormula parse_formula(const SExpr& e, const Signature& sig) {
  if (e.is_atom()) {
    if (e.atom == "true") return PositiveFormula::truth();
    if (e.atom == "false") return PositiveFormula::falsity();
    e.fail("expected a formula, found '" + e.atom + "'");
  }
  if (e.items.empty()) e.fail("empty formula");
  const SExpr& head = e.items.front();
  if (!head.is_atom()) head.fail("expected a connective or relation name");
  const std::string& op = head.atom;
  if (op == "not" || op == "forall" || op == "=>" || op == "implies" || op == "iff") {
    head.fail("'" + op + "' is not allowed: positive fragment only");
  }
  if (op == "and" || op == "or") {
    if (e.items.size() < 3) e.fail("'" + op + "' needs at least two subformulas");
    std::vector<PositiveFormula> kids;
    for (std::size_t i = 1; i < e.items.size(); ++i) kids.push_back(parse_formula(e.items[i], sig));
    return op == "and" ? PositiveFormula::conj(std::move(kids)) : PositiveFormula::disj(std::move(kids));
  }
  if (op == "exists") {
    if (e.items.size() != 3 || !e.items[1].is_list() || e.items[1].items.empty()) {
      e.fail("expected (exists (VAR+) formula)");
    }
    std::vector<std::string> vars;
    for (const auto& v : e.items[1].items) {
      if (!v.is_atom() || !valid_variable_name(v.atom) || sig.has_symbol(v.atom)) {
        v.fail("invalid bound variable");
      }
      if (std::find(vars.begin(), vars.end(), v.atom) != vars.end()) v.fail("variable '" + v.atom + "' bound twice");
      vars.push_back(v.atom);
    }
    return PositiveFormula::exists(std::move(vars), parse_formula(e.items[2], sig));
  }
  if (op == "=") {
    if (e.items.size() != 3) e.fail("equality takes exactly two terms");
    return PositiveFormula::equality(parse_term(e.items[1], sig), parse_term(e.items[2], sig));
  }
  auto rel = sig.relation_index(op);
  if (!rel) head.fail("unknown relation symbol '" + op + "'");
  const int arity = sig.relations()[*rel].arity;
  if (static_cast<int>(e.items.size()) - 1 != arity) {
    e.fail("relation '" + op + "' expects " + std::to_string(arity) + " arguments, got " +
           std::to_string(e.items.size() - 1));
  }
  std::vector<Term> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(parse_term(e.items[i], sig));
  return PositiveFormula::atom(op, std::move(args));
}

PositiveFormula parse_formula(std::string_view text, const Signature& sig) { return parse_formula(read_sexpr(text), sig); }

namespace {

PositiveFormula subst_rec(const PositiveFormula& f, std::vector<std::pair<std::string, Term>> subst, int& fresh) {
  using K = PositiveFormula::Kind;
  auto map_term = [&](const Term& t) {
    if (!t.is_variable()) return t;
    for (const auto& [name, term] : subst)
      if (name == t.name) return term;
    return t;
  };
  switch (f.kind()) {
    case K::Truth:
    case K::Falsity:
      return f;
    case K::Atom: {
      std::vector<Term> args;
      for (const auto& t : f.args()) args.push_back(map_term(t));
      return PositiveFormula::atom(f.relation(), std::move(args));
    }
    case K::Equality:
      return PositiveFormula::equality(map_term(f.args()[0]), map_term(f.args()[1]));
    case K::And:
    case K::Or: {
      std::vector<PositiveFormula> kids;
      for (const auto& c : f.children()) kids.push_back(subst_rec(c, subst, fresh));
      return f.kind() == K::And ? PositiveFormula::conj(std::move(kids)) : PositiveFormula::disj(std::move(kids));
    }
    case K::Exists: {
      std::vector<std::string> vars;
      for (const auto& v : f.bound()) {
        std::erase_if(subst, [&](const auto& p) { return p.first == v; });
        bool captured = std::any_of(subst.begin(), subst.end(),
                                    [&](const auto& p) { return p.second.is_variable() && p.second.name == v; });
        if (captured) {
          std::string renamed = v + "_" + std::to_string(++fresh);
          subst.emplace_back(v, Term::var(renamed));
          vars.push_back(renamed);
        } else {
          vars.push_back(v);
        }
      }
      return PositiveFormula::exists(std::move(vars), subst_rec(f.body(), subst, fresh));
    }
  }
  return f;
}

}  // namespace

PositiveFormula substitute(const PositiveFormula& f, const std::vector<std::pair<std::string, Term>>& subst) {
  int fresh = 0;
  return subst_rec(f, subst, fresh);
}

}  // namespace posmod
