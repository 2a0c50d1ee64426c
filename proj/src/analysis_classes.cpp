#include <algorithm>
#include <atomic>
#include <functional>

#include "posmod/analysis.hpp"
#include "posmod/canonical.hpp"
#include "posmod/parallel.hpp"
#include "posmod/semantics.hpp"

namespace posmod {

namespace {

void require_model(const FiniteStructure& a, const ModelUniverse& u) {
  if (a.signature() != u.theory().signature()) throw SignatureMismatch("structure signature differs from the theory's");
  SatisfactionResult r = satisfies(a, u.theory());
  if (!r.holds) {
    throw NotAModel("not a model of " + u.theory().name() + ": axiom " + r.label + " fails at " +
                    format_assignment(r.assignment));
  }
}

std::string member_text(const ModelUniverse& u, std::size_t i) {
  return "member " + std::to_string(i) + " " + serialize(u[i]);
}

// Visits homomorphisms a -> b in lexicographic order until `visit` returns
// false. Works in growing batches so early exits stay cheap.
bool for_each_hom(const FiniteStructure& a, const FiniteStructure& b, const std::function<bool(const ElementMap&)>& visit) {
  std::size_t limit = 64;
  std::size_t seen = 0;
  for (;;) {
    auto homs = find_homomorphisms(a, b, {}, limit);
    for (std::size_t i = seen; i < homs.size(); ++i)
      if (!visit(homs[i])) return false;
    if (homs.size() < limit) return true;
    seen = homs.size();
    limit *= 4;
  }
}

bool is_injective(const ElementMap& f) {
  std::vector<Element> s = f;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

// Scans members in order; `probe` returns a failure certificate or "".
Verdict scan_members(const ModelUniverse& u, const std::function<std::string(std::size_t)>& probe) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::string cert = probe(i);
    if (!cert.empty()) return Verdict::fails(cert);
  }
  return Verdict::holds_within(u.bound());
}

Verdict pc_verdict(const FiniteStructure& a, const ModelUniverse& u) {
  return scan_members(u, [&](std::size_t bi) {
    const FiniteStructure& b = u[bi];
    std::string cert;
    for_each_hom(a, b, [&](const ElementMap& f) {
      if (is_injective(f) && check_immersion(a, b, f, false).holds) return true;
      auto [formula, args] = distinguishing_formula(a, b, f);
      cert = "into " + member_text(u, bi) + " hom " + serialize_map(f) + " is not an immersion: " +
             to_string(formula);
      if (args.empty()) {
        cert += " holds in the member but not in the source";
      } else {
        cert += " holds at the image of " + format_tuple(args) + " but not at " + format_tuple(args) +
                " (x<e> names element e)";
      }
      return false;
    });
    return cert;
  });
}

Verdict hmax_verdict(const FiniteStructure& a, const ModelUniverse& u) {
  return scan_members(u, [&](std::size_t bi) {
    const FiniteStructure& b = u[bi];
    std::string cert;
    for_each_hom(a, b, [&](const ElementMap& f) {
      EmbeddingCheck e = check_embedding(a, b, f);
      if (e.holds) return true;
      cert = "into " + member_text(u, bi) + " hom " + serialize_map(f) + " is not an embedding: " + e.violation;
      return false;
    });
    return cert;
  });
}

std::vector<std::size_t> flagged(const ModelUniverse& u, ModelUniverse::Flag which,
                                 const std::function<bool(std::size_t)>& compute) {
  std::vector<char> value(u.size(), 0);
  parallel_for(u.size(), [&](std::size_t i) {
    auto cached = u.flag(which, i);
    bool v = cached ? *cached : compute(i);
    if (!cached) u.set_flag(which, i, v);
    value[i] = v;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (value[i]) out.push_back(i);
  return out;
}

}  // namespace

Verdict is_pc(const FiniteStructure& a, const ModelUniverse& u) {
  require_model(a, u);
  auto idx = u.index_of(a);
  if (idx) {
    auto cached = u.flag(ModelUniverse::Flag::Pc, *idx);
    if (cached && *cached) return Verdict::holds_within(u.bound());
  }
  Verdict v = pc_verdict(a, u);
  if (idx) u.set_flag(ModelUniverse::Flag::Pc, *idx, v.positive());
  return v;
}

Verdict is_pc(std::size_t member, const ModelUniverse& u) { return is_pc(u.members().at(member), u); }

Verdict is_h_maximal(const FiniteStructure& a, const ModelUniverse& u) {
  require_model(a, u);
  auto idx = u.index_of(a);
  if (idx) {
    auto cached = u.flag(ModelUniverse::Flag::HMax, *idx);
    if (cached && *cached) return Verdict::holds_within(u.bound());
  }
  Verdict v = hmax_verdict(a, u);
  if (idx) u.set_flag(ModelUniverse::Flag::HMax, *idx, v.positive());
  return v;
}

Verdict is_h_maximal(std::size_t member, const ModelUniverse& u) { return is_h_maximal(u.members().at(member), u); }

std::vector<std::size_t> pc_members(const ModelUniverse& u) {
  return flagged(u, ModelUniverse::Flag::Pc, [&](std::size_t i) { return pc_verdict(u[i], u).positive(); });
}

std::vector<std::size_t> h_maximal_members(const ModelUniverse& u) {
  return flagged(u, ModelUniverse::Flag::HMax, [&](std::size_t i) { return hmax_verdict(u[i], u).positive(); });
}

Continuation pc_continuation(const FiniteStructure& a, const ModelUniverse& u) {
  require_model(a, u);
  for (std::size_t i : pc_members(u)) {
    if (auto h = first_homomorphism(a, u[i])) return {Verdict::holds_within(u.bound()), i, *h};
  }
  return {Verdict::not_found(u.bound()), std::nullopt, {}};
}

namespace {

// Lazily computed "some homomorphism b -> d" table.
class ReachCache {
 public:
  explicit ReachCache(const ModelUniverse& u) : u_(u), cells_(u.size() * u.size()) {
    for (auto& c : cells_) c.store(-1);
  }
  bool reaches(std::size_t b, std::size_t d) {
    auto& c = cells_[b * u_.size() + d];
    int v = c.load();
    if (v < 0) {
      v = first_homomorphism(u_[b], u_[d]).has_value() ? 1 : 0;
      c.store(v);
    }
    return v == 1;
  }

 private:
  const ModelUniverse& u_;
  std::vector<std::atomic<int>> cells_;
};

}  // namespace

Verdict is_amalgamation_basis(const FiniteStructure& a, const ModelUniverse& u) {
  require_model(a, u);
  std::vector<std::vector<ElementMap>> homs(u.size());
  parallel_for(u.size(), [&](std::size_t i) { homs[i] = find_homomorphisms(a, u[i]); });
  ReachCache reach(u);
  // The first failing (B, C, f, g) always has B <= C: swapping gives another failure.
  std::vector<std::string> cert(u.size());
  std::atomic<std::size_t> first_bad{u.size()};
  parallel_for(u.size(), [&](std::size_t bi) {
    if (homs[bi].empty() || bi > first_bad.load()) return;
    for (std::size_t ci = bi; ci < u.size() && cert[bi].empty(); ++ci) {
      if (homs[ci].empty()) continue;
      std::vector<std::size_t> candidates;
      for (std::size_t d = 0; d < u.size(); ++d)
        if (reach.reaches(bi, d) && reach.reaches(ci, d)) candidates.push_back(d);
      for (const auto& f : homs[bi]) {
        for (const auto& g : homs[ci]) {
          PushoutPattern p = pushout_pattern(u[bi], u[ci], f, g, a.size());
          bool closed = std::any_of(candidates.begin(), candidates.end(),
                                    [&](std::size_t d) { return !solve_pattern(p.pattern, u[d], 1).empty(); });
          if (!closed) {
            cert[bi] = "no member closes B = " + member_text(u, bi) + ", C = " + member_text(u, ci) + ", f = " +
                       serialize_map(f) + ", g = " + serialize_map(g);
            break;
          }
        }
        if (!cert[bi].empty()) break;
      }
    }
    if (!cert[bi].empty()) {
      std::size_t cur = first_bad.load();
      while (bi < cur && !first_bad.compare_exchange_weak(cur, bi)) {
      }
    }
  });
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!cert[i].empty()) return Verdict::fails(cert[i]);
  return Verdict::holds_within(u.bound());
}

Amalgam asymmetric_amalgam(const FiniteStructure& a, const FiniteStructure& b, const FiniteStructure& c,
                           const ElementMap& i, const ElementMap& f, const ModelUniverse& u) {
  if (!is_homomorphism(a, b, i)) throw std::invalid_argument("i is not a homomorphism");
  if (!is_homomorphism(a, c, f)) throw std::invalid_argument("f is not a homomorphism");
  if (!check_immersion(a, b, i, false).holds) throw std::invalid_argument("i is not an immersion");
  for (std::size_t d = 0; d < u.size(); ++d) {
    if (!first_homomorphism(b, u[d])) continue;
    std::optional<Amalgam> found;
    for_each_hom(c, u[d], [&](const ElementMap& j) {
      if (!check_immersion(c, u[d], j, false).holds) return true;
      std::vector<Element> pins(static_cast<std::size_t>(b.size()), -1);
      for (int x = 0; x < a.size(); ++x) pins[i[x]] = j[f[x]];
      std::optional<ElementMap> g;
      try {
        g = first_homomorphism(b, u[d], pins);
      } catch (const std::invalid_argument&) {
        return true;
      }
      if (!g) return true;
      found = Amalgam{Verdict::holds_within(u.bound()), d, *g, j};
      return false;
    });
    if (found) return *found;
  }
  return {Verdict::not_found(u.bound()), std::nullopt, {}, {}};
}

Verdict is_complete(const ModelUniverse& u) {
  // With a common target for B and C separately, the two maps combine into
  // one map out of their sum (constants land on the target's constants).
  const std::size_t n = u.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  parallel_for(n, [&](std::size_t b) {
    for (std::size_t d = 0; d < n; ++d) reach[b][d] = first_homomorphism(u[b], u[d]).has_value();
  });
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t c = b + 1; c < n; ++c) {
      bool joint = false;
      for (std::size_t d = 0; d < n && !joint; ++d) joint = reach[b][d] && reach[c][d];
      if (!joint) {
        return Verdict::fails("no common continuation of " + member_text(u, b) + " and " + member_text(u, c));
      }
    }
  }
  return Verdict::holds_within(u.bound());
}

}  // namespace posmod
