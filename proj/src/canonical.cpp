#include "posmod/canonical.hpp"

#include <algorithm>
#include <cstdint>

namespace posmod {

namespace {

// Appends the code bits of position p given the labeling `order` (positions
// 0..p are assigned).
void append_level(const FiniteStructure& s, const std::vector<Element>& order, int p, std::vector<std::uint8_t>& out) {
  const Element here = order[p];
  for (Element c : s.constant_values()) out.push_back(c == here ? 0 : 1);
  const auto& rels = s.signature().relations();
  std::vector<int> pos;
  Tuple args;
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const int arity = rels[r].arity;
    pos.assign(arity, 0);
    args.assign(arity, 0);
    // Lexicographic walk over {0..p}^arity, keeping tuples that mention p.
    for (;;) {
      bool mentions = false;
      for (int i = 0; i < arity; ++i) {
        if (pos[i] == p) mentions = true;
        args[i] = order[pos[i]];
      }
      if (mentions) out.push_back(s.holds(r, args) ? 0 : 1);
      int i = arity - 1;
      while (i >= 0 && pos[i] == p) {
        pos[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++pos[i];
    }
  }
}

bool is_transposition_automorphism(const FiniteStructure& s, Element u, Element v) {
  for (Element c : s.constant_values())
    if (c == u || c == v) return false;
  auto swap = [&](Element e) { return e == u ? v : (e == v ? u : e); };
  Tuple img;
  for (std::size_t r = 0; r < s.signature().relations().size(); ++r) {
    for (const auto& t : s.table(r)) {
      img.resize(t.size());
      bool touched = false;
      for (std::size_t i = 0; i < t.size(); ++i) {
        img[i] = swap(t[i]);
        touched |= img[i] != t[i];
      }
      if (touched && !s.holds(r, img)) return false;
    }
  }
  return true;
}

class CanonicalSearch {
 public:
  explicit CanonicalSearch(const FiniteStructure& s) : s_(s), n_(s.size()) {
    twin_ = twin_classes(s);
    order_.assign(n_, -1);
    used_.assign(n_, false);
    best_.resize(n_);
  }

  CanonicalLabeling run() {
    descend(0, false);
    CanonicalLabeling out;
    out.order = best_order_;
    out.code = std::to_string(n_) + ":";
    for (const auto& level : best_)
      for (auto bit : level) out.code.push_back(static_cast<char>('0' + bit));
    return out;
  }

 private:
  const FiniteStructure& s_;
  int n_;
  std::vector<int> twin_;
  std::vector<Element> order_;
  std::vector<bool> used_;
  std::vector<std::vector<std::uint8_t>> best_;
  int best_depth_ = 0;
  std::vector<Element> best_order_;

  void descend(int p, bool improved) {
    if (p == n_) {
      if (improved || best_order_.empty()) best_order_ = order_;
      return;
    }
    std::vector<std::uint8_t> level;
    for (Element u = 0; u < n_; ++u) {
      if (used_[u]) continue;
      // Twins are interchangeable: place them in increasing index order.
      bool earlier_twin_free = false;
      for (Element t = 0; t < u; ++t) {
        if (!used_[t] && twin_[t] == twin_[u]) {
          earlier_twin_free = true;
          break;
        }
      }
      if (earlier_twin_free) continue;
      order_[p] = u;
      level.clear();
      append_level(s_, order_, p, level);
      bool now_improved = improved;
      if (best_depth_ > p) {
        int cmp = level < best_[p] ? -1 : (level == best_[p] ? 0 : 1);
        if (cmp > 0) continue;
        if (cmp < 0) {
          best_[p] = level;
          best_depth_ = p + 1;
          now_improved = true;
        }
      } else {
        best_[p] = level;
        best_depth_ = p + 1;
        now_improved = true;
      }
      used_[u] = true;
      descend(p + 1, now_improved);
      used_[u] = false;
    }
    order_[p] = -1;
  }
};

}  // namespace

std::vector<int> twin_classes(const FiniteStructure& s) {
  const int n = s.size();
  std::vector<int> cls(n, -1);
  int next = 0;
  for (Element u = 0; u < n; ++u) {
    if (cls[u] >= 0) continue;
    cls[u] = next;
    for (Element v = u + 1; v < n; ++v) {
      if (cls[v] < 0 && is_transposition_automorphism(s, u, v)) cls[v] = next;
    }
    ++next;
  }
  return cls;
}

CanonicalLabeling canonical_labeling(const FiniteStructure& s) { return CanonicalSearch(s).run(); }

std::string canonical_form(const FiniteStructure& s) { return canonical_labeling(s).code; }

FiniteStructure canonical_representative(const FiniteStructure& s) {
  auto lab = canonical_labeling(s);
  std::vector<Element> old_to_new(s.size());
  for (int p = 0; p < s.size(); ++p) old_to_new[lab.order[p]] = p;
  return relabel(s, old_to_new);
}

std::string labeled_code(const FiniteStructure& s) {
  std::vector<Element> order(s.size());
  for (int i = 0; i < s.size(); ++i) order[i] = i;
  std::vector<std::uint8_t> bits;
  for (int p = 0; p < s.size(); ++p) append_level(s, order, p, bits);
  std::string out = std::to_string(s.size()) + ":";
  for (auto b : bits) out.push_back(static_cast<char>('0' + b));
  return out;
}

std::optional<ElementMap> isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("isomorphism test needs equal signatures");
  if (a.size() != b.size() || a.tuple_count() != b.tuple_count()) return std::nullopt;
  auto la = canonical_labeling(a);
  auto lb = canonical_labeling(b);
  if (la.code != lb.code) return std::nullopt;
  ElementMap map(a.size());
  for (int p = 0; p < a.size(); ++p) map[la.order[p]] = lb.order[p];
  return map;
}

}  // namespace posmod
