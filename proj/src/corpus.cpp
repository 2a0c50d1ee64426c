#include "posmod/corpus.hpp"

#include <stdexcept>

namespace posmod::corpus {

namespace {

std::string vars(const std::string& prefix, int m) {
  std::string out;
  for (int i = 1; i <= m; ++i) out += (i > 1 ? " " : "") + prefix + std::to_string(i);
  return out;
}

std::string cycle_body(int m) {
  std::string out = "(and";
  for (int i = 1; i <= m; ++i) out += " (S x" + std::to_string(i) + " x" + std::to_string(i % m + 1) + ")";
  return out + ")";
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

std::string cycle_theory_text(CycleVariant variant, int n, int cap) {
  std::string name = "T";
  if (variant == CycleVariant::TPrime) name = "Tprime";
  if (variant == CycleVariant::Tn) {
    if (n <= 3) throw std::invalid_argument("T_n needs n > 3");
    if (cap < n) throw std::invalid_argument("the schema cap must be at least n");
    name = "T" + std::to_string(n);
  }
  std::string out;
  if (variant == CycleVariant::Tn) {
    out += "; collapse axioms emitted for " + std::to_string(n) + " < m <= " + std::to_string(cap) +
           "; complete for models with at most " + std::to_string(cap) + " elements\n";
  }
  out += "(theory " + name + "\n  (sig (rel S 2))\n";
  out += "  (axiom no-2-cycle (not (exists (x y) (and (S x y) (S y x)))))\n";
  out += "  (axiom injective (forall (x y z) (=> (and (S x z) (S y z)) (= x y))))";
  if (variant != CycleVariant::T) {
    out += "\n  (axiom no-4-cycle (not (exists (" + vars("x", 4) + ") " + cycle_body(4) + ")))";
  }
  if (variant == CycleVariant::Tn) {
    for (int m = n + 1; m <= cap; ++m) {
      std::string eqs = "(or";
      for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) eqs += " (= x" + std::to_string(i) + " x" + std::to_string(j) + ")";
      eqs += ")";
      out += "\n  (axiom collapse-" + std::to_string(m) + " (forall (" + vars("x", m) + ") (=> " + cycle_body(m) +
             " " + eqs + ")))";
    }
  }
  return out + ")\n";
}

Theory cycle_theory(CycleVariant variant, int n, int cap) { return parse_theory(cycle_theory_text(variant, n, cap)); }

std::vector<NamedStructure> cycle_samples() {
  using namespace shapes;
  return {{"C3", cycle(3)},
          {"C5", cycle(5)},
          {"C3+C5", disjoint_sum(cycle(3), cycle(5))},
          {"chain2", chain(2)},
          {"points2", points(2)},
          {"C4", cycle(4)}};
}

std::string group_theory_text() {
  return "(theory Tag+\n"
         "  (sig (rel P 3) (const e) (const a))\n"
         "  (axiom total (forall (x y) (=> true (exists (z) (P x y z)))))\n"
         "  (axiom functional (forall (x y z w) (=> (and (P x y z) (P x y w)) (= z w))))\n"
         "  (axiom assoc (forall (x y z u v w) (=> (and (P x y u) (P u z w) (P y z v)) (P x v w))))\n"
         "  (axiom comm (forall (x y z) (=> (P x y z) (P y x z))))\n"
         "  (axiom identity (forall (x) (=> true (P e x x))))\n"
         "  (axiom inverse (forall (x) (=> true (exists (y) (P x y e)))))\n"
         "  (axiom nontrivial (not (= a e))))\n";
}

Theory group_theory() { return parse_theory(group_theory_text()); }

FiniteStructure abelian_group(const std::vector<int>& moduli, const std::vector<int>& a) {
  if (moduli.empty() || moduli.size() != a.size()) throw std::invalid_argument("moduli and element differ in length");
  int n = 1;
  for (int m : moduli) {
    if (m < 1) throw std::invalid_argument("moduli must be positive");
    n *= m;
  }
  auto decode = [&](int x) {
    std::vector<int> c(moduli.size());
    for (int i = static_cast<int>(moduli.size()) - 1; i >= 0; --i) {
      c[i] = x % moduli[i];
      x /= moduli[i];
    }
    return c;
  };
  auto encode = [&](const std::vector<int>& c) {
    int x = 0;
    for (std::size_t i = 0; i < moduli.size(); ++i) x = x * moduli[i] + c[i];
    return x;
  };
  std::vector<Tuple> table;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      auto cx = decode(x);
      auto cy = decode(y);
      for (std::size_t i = 0; i < moduli.size(); ++i) cx[i] = (cx[i] + cy[i]) % moduli[i];
      table.push_back({x, y, encode(cx)});
    }
  }
  std::vector<int> ac = a;
  for (std::size_t i = 0; i < moduli.size(); ++i) ac[i] = ((ac[i] % moduli[i]) + moduli[i]) % moduli[i];
  Signature sig({{"P", 3}}, {"e", "a"});
  return FiniteStructure(sig, n, {table}, {0, encode(ac)});
}

FiniteStructure cyclic_group(int p, int k, int g) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (k < 1) throw std::invalid_argument("exponent must be at least 1");
  int order = 1;
  for (int i = 0; i < k; ++i) order *= p;
  if (((g % order) + order) % order == 0) throw std::invalid_argument("the distinguished element must not be 0");
  return abelian_group({order}, {g});
}

std::string successor_theory_text() {
  return "(theory Tsucc\n"
         "  (sig (rel F 2))\n"
         "  (axiom total (forall (x) (=> true (exists (y) (F x y)))))\n"
         "  (axiom functional (forall (x y z) (=> (and (F x y) (F x z)) (= y z))))\n"
         "  (axiom no-fixed-point (not (exists (x) (F x x)))))\n";
}

Theory successor_theory() { return parse_theory(successor_theory_text()); }

FiniteStructure functional_cycle(int p) { return shapes::cycle(p, "F"); }

}  // namespace posmod::corpus
