#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treeca {

enum class Status { certified, refuted, bounded_evidence };

std::string_view to_string(Status s);

/// Outcome of a property check.
///
/// Certified is only issued for finitely decidable questions (permutivity, a property at a
/// fixed parameter). Absence of a counterexample up to a bound is BoundedEvidence, never
/// Certified. A Refuted verdict always carries a witness that can be replayed.
struct Verdict {
  Status status = Status::bounded_evidence;
  int bound = 0;
  std::vector<std::string> witness;
  std::vector<std::pair<std::string, std::string>> detail;

  static Verdict certified(int bound) { return {Status::certified, bound, {}, {}}; }
  static Verdict refuted(int bound, std::vector<std::string> witness) {
    return {Status::refuted, bound, std::move(witness), {}};
  }
  static Verdict evidence(int bound) { return {Status::bounded_evidence, bound, {}, {}}; }

  Verdict& with(std::string key, std::string value) {
    detail.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  std::optional<std::string> get(std::string_view key) const;

  /// verdict: / bound: / witness: / detail: lines.
  std::string serialize() const;
  /// One line of space-separated key=value pairs.
  std::string to_record() const;
};

}  // namespace treeca
