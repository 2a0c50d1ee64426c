#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "posmod/model_finder.hpp"
#include "posmod/structure.hpp"
#include "posmod/theory.hpp"

namespace posmod {

/// All models of a theory with at most `bound` elements, one canonical
/// representative per isomorphism class, sorted by (size, canonical code).
class ModelUniverse {
 public:
  /// Validates that members are canonical, sorted, pairwise non-isomorphic
  /// models of `theory` with size <= bound.
  ModelUniverse(Theory theory, int bound, std::vector<FiniteStructure> members);

  ModelUniverse(const ModelUniverse& other);
  ModelUniverse& operator=(const ModelUniverse& other);

  const Theory& theory() const { return theory_; }
  int bound() const { return bound_; }
  const std::vector<FiniteStructure>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const FiniteStructure& operator[](std::size_t i) const { return members_[i]; }
  const std::string& code(std::size_t i) const { return codes_[i]; }

  /// Index of the member isomorphic to `s`, if any.
  std::optional<std::size_t> index_of(const FiniteStructure& s) const;

  enum class Flag { Pc, HMax };
  /// Cached flag of a member; flags are written once and recomputation
  /// stores the same value.
  std::optional<bool> flag(Flag which, std::size_t i) const;
  void set_flag(Flag which, std::size_t i, bool value) const;

 private:
  Theory theory_;
  int bound_ = 0;
  std::vector<FiniteStructure> members_;
  std::vector<std::string> codes_;
  mutable std::mutex mutex_;
  mutable std::vector<signed char> pc_;
  mutable std::vector<signed char> hmax_;
};

/// Enumerates sizes 1..n (sizes in parallel when parallelism() > 1).
/// Throws std::invalid_argument for n < 1 and BudgetExceeded when a size
/// exceeds the finder budget.
ModelUniverse enumerate_models(const Theory& t, int n, const FinderOptions& opt = {});

inline constexpr int kUniverseFormatVersion = 1;

/// Writes member files m0000.pms, ... and manifest.json into `dir`.
void save_universe(const ModelUniverse& u, const std::filesystem::path& dir);

/// Reads a saved universe. Returns nullopt when the directory holds no
/// manifest, or the manifest belongs to another theory, bound or version.
/// Throws std::runtime_error for a manifest that matches but is corrupt.
std::optional<ModelUniverse> load_universe(const std::filesystem::path& dir, const Theory& t, int bound);

}  // namespace posmod
