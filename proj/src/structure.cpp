#include "posmod/structure.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "posmod/sexpr.hpp"

namespace posmod {

namespace {

constexpr std::array<std::string_view, 10> kReserved = {"true", "false", "and", "or", "exists",
                                                        "forall", "not", "=>", "=", "map"};

bool reserved(std::string_view name) {
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Signature::Signature(std::vector<RelationSymbol> relations, std::vector<std::string> constants)
    : relations_(std::move(relations)), constants_(std::move(constants)) {
  std::set<std::string_view> seen;
  for (const auto& r : relations_) {
    if (r.arity < 1) throw std::invalid_argument("relation '" + r.name + "' must have arity >= 1");
    if (r.name.empty() || reserved(r.name)) throw std::invalid_argument("invalid relation name '" + r.name + "'");
    if (!seen.insert(r.name).second) throw std::invalid_argument("duplicate symbol '" + r.name + "'");
  }
  for (const auto& c : constants_) {
    if (c.empty() || reserved(c)) throw std::invalid_argument("invalid constant name '" + c + "'");
    if (!seen.insert(c).second) throw std::invalid_argument("duplicate symbol '" + c + "'");
  }
}

std::optional<std::size_t> Signature::relation_index(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Signature::constant_index(std::string_view name) const {
  for (std::size_t i = 0; i < constants_.size(); ++i)
    if (constants_[i] == name) return i;
  return std::nullopt;
}

bool Signature::has_symbol(std::string_view name) const {
  return relation_index(name).has_value() || constant_index(name).has_value();
}

Signature Signature::with_constants(const std::vector<std::string>& extra) const {
  auto consts = constants_;
  consts.insert(consts.end(), extra.begin(), extra.end());
  return Signature(relations_, std::move(consts));
}

FiniteStructure::FiniteStructure(Signature sig, int size, std::vector<std::vector<Tuple>> tables,
                                 std::vector<Element> constant_values)
    : sig_(std::move(sig)), size_(size), tables_(std::move(tables)), constants_(std::move(constant_values)) {
  if (size_ < 1) throw std::invalid_argument("universe size must be at least 1");
  const auto& rels = sig_.relations();
  if (tables_.size() != rels.size()) throw std::invalid_argument("table count does not match signature");
  if (constants_.size() != sig_.constants().size()) {
    throw std::invalid_argument("every constant must be assigned exactly one element");
  }
  for (std::size_t c = 0; c < constants_.size(); ++c) {
    if (constants_[c] < 0 || constants_[c] >= size_) {
      throw std::invalid_argument("constant '" + sig_.constants()[c] + "' assigned out-of-range element " +
                                  std::to_string(constants_[c]));
    }
  }
  members_.resize(rels.size());
  for (std::size_t r = 0; r < rels.size(); ++r) {
    auto& table = tables_[r];
    for (const auto& t : table) {
      if (static_cast<int>(t.size()) != rels[r].arity) {
        throw std::invalid_argument("tuple " + format_tuple(t) + " has wrong arity for '" + rels[r].name + "'");
      }
      for (Element e : t) {
        if (e < 0 || e >= size_) {
          throw std::invalid_argument("element " + std::to_string(e) + " out of range in relation '" +
                                      rels[r].name + "'");
        }
      }
    }
    std::sort(table.begin(), table.end());
    table.erase(std::unique(table.begin(), table.end()), table.end());
    members_[r].assign(ipow(static_cast<std::size_t>(size_), rels[r].arity), false);
    for (const auto& t : table) members_[r][cell(r, t)] = true;
  }
}

FiniteStructure FiniteStructure::empty(Signature sig, int size) {
  std::vector<std::vector<Tuple>> tables(sig.relations().size());
  return FiniteStructure(std::move(sig), size, std::move(tables), {});
}

std::size_t FiniteStructure::cell(std::size_t rel, std::span<const Element> args) const {
  (void)rel;
  std::size_t idx = 0;
  for (Element e : args) idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(e);
  return idx;
}

bool FiniteStructure::holds(std::size_t rel, std::span<const Element> args) const {
  return members_[rel][cell(rel, args)];
}

std::size_t FiniteStructure::tuple_count() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

bool FiniteStructure::operator==(const FiniteStructure& other) const {
  return sig_ == other.sig_ && size_ == other.size_ && tables_ == other.tables_ && constants_ == other.constants_;
}

namespace {

struct RawRelation {
  std::string name;
  std::vector<Tuple> tuples;
  const SExpr* where;
};

}  // namespace

FiniteStructure parse_structure(std::string_view text, const Signature* sig) {
  SExpr root = read_sexpr(text);
  if (!root.has_head("structure")) root.fail("expected (structure ...)");
  if (root.items.size() < 2 || !root.items[1].has_head("universe") || root.items[1].items.size() != 2) {
    root.fail("expected (universe N) as the first clause of a structure");
  }
  const int size = atom_to_int(root.items[1].items[1]);
  if (size < 1) root.items[1].fail("universe size must be at least 1");

  std::vector<RawRelation> rels;
  std::vector<std::pair<std::string, const SExpr*>> consts;
  std::vector<Element> const_vals;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& clause = root.items[i];
    if (clause.has_head("rel")) {
      if (clause.items.size() < 2 || !clause.items[1].is_atom()) clause.fail("expected (rel NAME tuple*)");
      RawRelation raw{clause.items[1].atom, {}, &clause};
      for (std::size_t j = 2; j < clause.items.size(); ++j) {
        const SExpr& t = clause.items[j];
        if (!t.is_list() || t.items.empty()) t.fail("expected a non-empty tuple (INT+)");
        Tuple tuple;
        for (const auto& e : t.items) {
          int v = atom_to_int(e);
          if (v >= size) e.fail("element " + std::to_string(v) + " out of range for universe " + std::to_string(size));
          tuple.push_back(v);
        }
        if (!raw.tuples.empty() && raw.tuples.front().size() != tuple.size()) {
          t.fail("inconsistent arity in relation '" + raw.name + "'");
        }
        raw.tuples.push_back(std::move(tuple));
      }
      for (const auto& other : rels)
        if (other.name == raw.name) clause.fail("relation '" + raw.name + "' listed twice");
      rels.push_back(std::move(raw));
    } else if (clause.has_head("const")) {
      if (clause.items.size() != 3 || !clause.items[1].is_atom()) clause.fail("expected (const NAME INT)");
      int v = atom_to_int(clause.items[2]);
      if (v >= size) clause.items[2].fail("element " + std::to_string(v) + " out of range for universe " + std::to_string(size));
      for (const auto& other : consts)
        if (other.first == clause.items[1].atom) clause.fail("constant '" + other.first + "' assigned twice");
      consts.emplace_back(clause.items[1].atom, &clause);
      const_vals.push_back(v);
    } else {
      clause.fail("expected (rel ...) or (const ...)");
    }
  }

  if (sig != nullptr) {
    std::vector<std::vector<Tuple>> tables(sig->relations().size());
    for (auto& raw : rels) {
      auto idx = sig->relation_index(raw.name);
      if (!idx) raw.where->fail("unknown relation symbol '" + raw.name + "'");
      const int arity = sig->relations()[*idx].arity;
      for (const auto& t : raw.tuples) {
        if (static_cast<int>(t.size()) != arity) {
          raw.where->fail("relation '" + raw.name + "' expects arity " + std::to_string(arity));
        }
      }
      tables[*idx] = std::move(raw.tuples);
    }
    std::vector<Element> values(sig->constants().size(), -1);
    for (std::size_t c = 0; c < consts.size(); ++c) {
      auto idx = sig->constant_index(consts[c].first);
      if (!idx) consts[c].second->fail("unknown constant symbol '" + consts[c].first + "'");
      values[*idx] = const_vals[c];
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (values[c] < 0) root.fail("constant '" + sig->constants()[c] + "' is not assigned");
    }
    return FiniteStructure(*sig, size, std::move(tables), std::move(values));
  }

  std::vector<RelationSymbol> symbols;
  std::vector<std::vector<Tuple>> tables;
  for (auto& raw : rels) {
    if (raw.tuples.empty()) raw.where->fail("cannot infer the arity of empty relation '" + raw.name + "'");
    symbols.push_back({raw.name, static_cast<int>(raw.tuples.front().size())});
    tables.push_back(std::move(raw.tuples));
  }
  std::vector<std::string> names;
  for (const auto& c : consts) names.push_back(c.first);
  try {
    return FiniteStructure(Signature(std::move(symbols), std::move(names)), size, std::move(tables),
                           std::move(const_vals));
  } catch (const std::invalid_argument& e) {
    root.fail(e.what());
  }
}

FiniteStructure parse_structure(std::string_view text, const Signature& sig) { return parse_structure(text, &sig); }

std::string format_tuple(std::span<const Element> tuple) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(tuple[i]);
  }
  return out + ")";
}

std::string serialize(const FiniteStructure& s) {
  std::string out = "(structure (universe " + std::to_string(s.size()) + ")";
  const auto& rels = s.signature().relations();
  for (std::size_t r = 0; r < rels.size(); ++r) {
    if (s.table(r).empty()) continue;
    out += " (rel " + rels[r].name;
    for (const auto& t : s.table(r)) out += " " + format_tuple(t);
    out += ")";
  }
  const auto& consts = s.signature().constants();
  for (std::size_t c = 0; c < consts.size(); ++c) {
    out += " (const " + consts[c] + " " + std::to_string(s.constant_value(c)) + ")";
  }
  return out + ")";
}

std::string serialize_map(const ElementMap& map) {
  std::string out = "(map";
  for (std::size_t i = 0; i < map.size(); ++i) out += " (" + std::to_string(i) + " " + std::to_string(map[i]) + ")";
  return out + ")";
}

ElementMap parse_map(std::string_view text, int source_size) {
  SExpr root = read_sexpr(text);
  if (!root.has_head("map")) root.fail("expected (map (SRC DST)*)");
  ElementMap map(static_cast<std::size_t>(source_size), -1);
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& pair = root.items[i];
    if (!pair.is_list() || pair.items.size() != 2) pair.fail("expected (SRC DST)");
    int src = atom_to_int(pair.items[0]);
    int dst = atom_to_int(pair.items[1]);
    if (src >= source_size) pair.fail("source element " + std::to_string(src) + " out of range");
    if (map[src] >= 0) pair.fail("source element " + std::to_string(src) + " mapped twice");
    map[src] = dst;
  }
  for (int i = 0; i < source_size; ++i)
    if (map[i] < 0) root.fail("map is not total: element " + std::to_string(i) + " has no image");
  return map;
}

FiniteStructure extend_signature(const FiniteStructure& s, const Signature& wider) {
  std::vector<std::vector<Tuple>> tables(wider.relations().size());
  const auto& rels = s.signature().relations();
  for (std::size_t r = 0; r < rels.size(); ++r) {
    auto idx = wider.relation_index(rels[r].name);
    if (!idx || wider.relations()[*idx].arity != rels[r].arity) {
      throw SignatureMismatch("relation '" + rels[r].name + "' missing from the wider signature");
    }
    tables[*idx] = s.table(r);
  }
  if (wider.constants() != s.signature().constants()) {
    throw SignatureMismatch("constants must agree when widening a signature");
  }
  return FiniteStructure(wider, s.size(), std::move(tables), s.constant_values());
}

Signature merge_signatures(const Signature& a, const Signature& b) {
  if (!a.constants().empty() || !b.constants().empty()) {
    if (a.constants() != b.constants()) throw SignatureMismatch("cannot merge signatures with different constants");
  }
  auto rels = a.relations();
  for (const auto& r : b.relations()) {
    auto idx = a.relation_index(r.name);
    if (idx) {
      if (a.relations()[*idx].arity != r.arity) throw SignatureMismatch("arity conflict for '" + r.name + "'");
    } else {
      rels.push_back(r);
    }
  }
  return Signature(std::move(rels), a.constants());
}

FiniteStructure relabel(const FiniteStructure& s, std::span<const Element> old_to_new) {
  std::vector<std::vector<Tuple>> tables;
  for (std::size_t r = 0; r < s.signature().relations().size(); ++r) {
    std::vector<Tuple> t;
    for (const auto& tuple : s.table(r)) {
      Tuple img;
      for (Element e : tuple) img.push_back(old_to_new[e]);
      t.push_back(std::move(img));
    }
    tables.push_back(std::move(t));
  }
  std::vector<Element> consts;
  for (Element c : s.constant_values()) consts.push_back(old_to_new[c]);
  return FiniteStructure(s.signature(), s.size(), std::move(tables), std::move(consts));
}

FiniteStructure induced_substructure(const FiniteStructure& s, std::span<const Element> subset) {
  std::vector<Element> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) throw std::invalid_argument("induced substructure needs a non-empty subset");
  std::vector<Element> index(s.size(), -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= s.size()) throw std::invalid_argument("subset element out of range");
    index[sorted[i]] = static_cast<Element>(i);
  }
  std::vector<Element> consts;
  for (std::size_t c = 0; c < s.constant_values().size(); ++c) {
    Element v = s.constant_value(c);
    if (index[v] < 0) {
      throw std::invalid_argument("constant '" + s.signature().constants()[c] + "' lies outside the subset");
    }
    consts.push_back(index[v]);
  }
  std::vector<std::vector<Tuple>> tables;
  for (std::size_t r = 0; r < s.signature().relations().size(); ++r) {
    std::vector<Tuple> t;
    for (const auto& tuple : s.table(r)) {
      Tuple img;
      bool inside = true;
      for (Element e : tuple) {
        if (index[e] < 0) {
          inside = false;
          break;
        }
        img.push_back(index[e]);
      }
      if (inside) t.push_back(std::move(img));
    }
    tables.push_back(std::move(t));
  }
  return FiniteStructure(s.signature(), static_cast<int>(sorted.size()), std::move(tables), std::move(consts));
}

FiniteStructure disjoint_sum(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("disjoint sum needs equal signatures");
  if (!a.signature().constants().empty()) {
    throw std::invalid_argument("disjoint sum is undefined for signatures with constants");
  }
  std::vector<std::vector<Tuple>> tables;
  for (std::size_t r = 0; r < a.signature().relations().size(); ++r) {
    std::vector<Tuple> t = a.table(r);
    for (const auto& tuple : b.table(r)) {
      Tuple img;
      for (Element e : tuple) img.push_back(e + a.size());
      t.push_back(std::move(img));
    }
    tables.push_back(std::move(t));
  }
  return FiniteStructure(a.signature(), a.size() + b.size(), std::move(tables), {});
}

FiniteStructure product(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("product needs equal signatures");
  const int nb = b.size();
  std::vector<std::vector<Tuple>> tables;
  for (std::size_t r = 0; r < a.signature().relations().size(); ++r) {
    std::vector<Tuple> t;
    for (const auto& ta : a.table(r)) {
      for (const auto& tb : b.table(r)) {
        Tuple img(ta.size());
        for (std::size_t i = 0; i < ta.size(); ++i) img[i] = ta[i] * nb + tb[i];
        t.push_back(std::move(img));
      }
    }
    tables.push_back(std::move(t));
  }
  std::vector<Element> consts;
  for (std::size_t c = 0; c < a.constant_values().size(); ++c) {
    consts.push_back(a.constant_value(c) * nb + b.constant_value(c));
  }
  return FiniteStructure(a.signature(), a.size() * nb, std::move(tables), std::move(consts));
}

namespace shapes {

Signature digraph_signature(const std::string& rel) { return Signature({{rel, 2}}, {}); }

FiniteStructure cycle(int p, const std::string& rel) {
  std::vector<Tuple> edges;
  for (int i = 0; i < p; ++i) edges.push_back({i, (i + 1) % p});
  return FiniteStructure(digraph_signature(rel), p, {std::move(edges)}, {});
}

FiniteStructure chain(int n, const std::string& rel) {
  std::vector<Tuple> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return FiniteStructure(digraph_signature(rel), n, {std::move(edges)}, {});
}

FiniteStructure points(int n, const std::string& rel) { return FiniteStructure::empty(digraph_signature(rel), n); }

}  // namespace shapes

}  // namespace posmod
