#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace treeca {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// base^exp, clamped to kSaturated on overflow.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) noexcept;
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) noexcept;

/// Upper bound on the number of elementary enumeration steps one invocation may take.
/// Every exhaustive search checks its worst-case size against this before starting.
struct Budget {
  static constexpr std::uint64_t kDefault = std::uint64_t{1} << 32;

  std::uint64_t max_work = kDefault;

  /// Default budget, overridden by the TREECA_BUDGET environment variable when set.
  static Budget from_env();

  /// Throws BudgetExceeded naming `what` when `work` exceeds the limit.
  void require(std::uint64_t work, std::string_view what) const;
};

}  // namespace treeca
