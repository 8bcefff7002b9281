#include "treeca/budget.hpp"

#include <cstdlib>
#include <string>

#include "treeca/error.hpp"

namespace treeca {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) noexcept {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) noexcept {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    result = saturating_mul(result, base);
    if (result == kSaturated || result == 0 || base == 1) break;
  }
  return result;
}

Budget Budget::from_env() {
  Budget b;
  if (const char* env = std::getenv("TREECA_BUDGET"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size() || v == 0) throw std::invalid_argument("trailing");
      b.max_work = v;
    } catch (const std::exception&) {
      throw InvalidInput(std::string("TREECA_BUDGET must be a positive integer, got '") + env + "'");
    }
  }
  return b;
}

void Budget::require(std::uint64_t work, std::string_view what) const {
  if (work > max_work) {
    std::string need = work == kSaturated ? std::string("more than 2^64") : std::to_string(work);
    throw BudgetExceeded(std::string(what) + " needs " + need + " enumeration steps; budget is " +
                         std::to_string(max_work) + " (raise with --budget or TREECA_BUDGET)");
  }
}

}  // namespace treeca
