#pragma once

#include <string>
#include <utility>
#include <vector>

#include "posmod/structure.hpp"
#include "posmod/theory.hpp"

namespace posmod::corpus {

enum class CycleVariant { T, TPrime, Tn };

/// Theories over {S/2}: T (no 2-cycle, injective S), T' (T plus no closed
/// 4-walk) and T_n (T' plus, for n < m <= cap, "every m-cycle repeats a
/// vertex"). T_n requires n > 3 and cap >= n.
std::string cycle_theory_text(CycleVariant variant, int n = 0, int cap = 0);
Theory cycle_theory(CycleVariant variant, int n = 0, int cap = 0);

using NamedStructure = std::pair<std::string, FiniteStructure>;

/// C3, C5, C3+C5, 2-chain, two isolated points, C4.
std::vector<NamedStructure> cycle_samples();

/// Abelian groups with a distinguished non-identity element, relational
/// encoding P(x, y, z) <=> x + y = z, constants e and a.
std::string group_theory_text();
Theory group_theory();

/// Z/m1 x ... x Z/mk with a = the given coordinates; elements are numbered in
/// mixed radix (first coordinate most significant).
FiniteStructure abelian_group(const std::vector<int>& moduli, const std::vector<int>& a);

/// Z/p^k with a = g. Throws std::invalid_argument for non-prime p, k < 1 or
/// g = 0 mod p^k.
FiniteStructure cyclic_group(int p, int k, int g);

/// F/2 with totality, functionality and no fixed point.
std::string successor_theory_text();
Theory successor_theory();
/// The functional p-cycle x -> x + 1 mod p.
FiniteStructure functional_cycle(int p);

}  // namespace posmod::corpus
