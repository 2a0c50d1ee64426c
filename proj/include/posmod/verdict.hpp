#pragma once

#include <string>

namespace posmod {

enum class VerdictKind {
  Holds,           // exact, no bound involved
  HoldsWithin,     // exact for the universe up to `bound`
  Fails,           // with a certificate
  Refuted,         // countermodel found
  NotRefutedUpTo,  // no countermodel up to `bound`
  NotFoundWithin,  // searched the universe up to `bound`
  Inconclusive,    // a precondition of the question is not met at this bound
};

struct Verdict {
  VerdictKind kind = VerdictKind::Holds;
  int bound = 0;
  std::string certificate;  // replayable text for Fails/Refuted, reason for Inconclusive

  static Verdict holds() { return {VerdictKind::Holds, 0, {}}; }
  static Verdict holds_within(int n) { return {VerdictKind::HoldsWithin, n, {}}; }
  static Verdict fails(std::string cert) { return {VerdictKind::Fails, 0, std::move(cert)}; }
  static Verdict refuted(std::string cert) { return {VerdictKind::Refuted, 0, std::move(cert)}; }
  static Verdict not_refuted(int n) { return {VerdictKind::NotRefutedUpTo, n, {}}; }
  static Verdict not_found(int n) { return {VerdictKind::NotFoundWithin, n, {}}; }
  static Verdict inconclusive(int n, std::string why) { return {VerdictKind::Inconclusive, n, std::move(why)}; }

  /// True for Holds, HoldsWithin and NotRefutedUpTo.
  bool positive() const {
    return kind == VerdictKind::Holds || kind == VerdictKind::HoldsWithin || kind == VerdictKind::NotRefutedUpTo;
  }
  bool failed() const { return kind == VerdictKind::Fails || kind == VerdictKind::Refuted; }

  /// "HOLDS", "HOLDS_WITHIN(6)", "FAILS", "REFUTED", "NOT_REFUTED_UP_TO(5)", ...
  std::string label() const {
    switch (kind) {
      case VerdictKind::Holds:
        return "HOLDS";
      case VerdictKind::HoldsWithin:
        return "HOLDS_WITHIN(" + std::to_string(bound) + ")";
      case VerdictKind::Fails:
        return "FAILS";
      case VerdictKind::Refuted:
        return "REFUTED";
      case VerdictKind::NotRefutedUpTo:
        return "NOT_REFUTED_UP_TO(" + std::to_string(bound) + ")";
      case VerdictKind::NotFoundWithin:
        return "NOT_FOUND_WITHIN(" + std::to_string(bound) + ")";
      case VerdictKind::Inconclusive:
        return "INCONCLUSIVE(" + std::to_string(bound) + ")";
    }
    return "?";
  }
};

}  // namespace posmod
