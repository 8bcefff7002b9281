#include <algorithm>

#include "treeca/analysis.hpp"
#include "treeca/error.hpp"
#include "treeca/kernels.hpp"

namespace treeca {

OrphanResult orphan_search(const LocalRule& rule, int max_depth, const Budget& budget) {
  if (max_depth < 1) throw InvalidInput("orphan search depth must be at least 1");
  if (rule.alphabet_size() == 1) return {Verdict::evidence(max_depth).with("note", "degenerate-alphabet"), {}};
  for (int n = 1; n <= max_depth; ++n) {
    const auto counts = parallel::image_histogram(rule, n, budget);
    const auto it = std::find(counts.begin(), counts.end(), std::uint64_t{0});
    if (it != counts.end()) {
      auto orphan = pattern_from_key(rule.geometry(), rule.alphabet_size(), n,
                                     static_cast<std::uint64_t>(it - counts.begin()));
      auto verdict = Verdict::refuted(n, {to_string(orphan)}).with("property", "surjective");
      return {std::move(verdict), std::move(orphan)};
    }
  }
  return {Verdict::evidence(max_depth).with("property", "surjective"), {}};
}

BalanceReport balance_report(const LocalRule& rule, int level, const Budget& budget) {
  const auto& g = rule.geometry();
  auto counts = parallel::image_histogram(rule, level, budget);
  const auto expected = saturating_pow(static_cast<std::uint64_t>(rule.alphabet_size()),
                                       g.delta_size(level + rule.radius()) - g.delta_size(level));
  const auto block = [&](std::uint64_t key) { return pattern_from_key(g, rule.alphabet_size(), level, key); };

  const auto min_it = std::min_element(counts.begin(), counts.end());
  const auto max_it = std::max_element(counts.begin(), counts.end());
  BalanceReport report{
      level,
      expected,
      *min_it,
      *max_it,
      block(static_cast<std::uint64_t>(min_it - counts.begin())),
      block(static_cast<std::uint64_t>(max_it - counts.begin())),
      std::nullopt,
      std::nullopt,
      {},
  };
  for (std::uint64_t q = 0; q < counts.size(); ++q) {
    if (!report.over_witness && counts[q] > expected) report.over_witness = block(q);
    if (!report.orphan && counts[q] == 0) report.orphan = block(q);
  }
  report.counts = std::move(counts);
  return report;
}

}  // namespace treeca
