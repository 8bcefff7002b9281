#include <algorithm>
#include <vector>

#include "treeca/analysis.hpp"
#include "treeca/dynamics.hpp"
#include "treeca/error.hpp"

namespace treeca {

namespace {

// Depth-first search for bases whose Δ_N trajectory matches a fixed one. The value
// τ^t(g)(v) becomes available once cell k^(tr)·v + |Δ_(tr+1)| - 1 is assigned, so it is
// checked right there.
class TrajectorySearch {
 public:
  TrajectorySearch(const LocalRule& rule, int window, int horizon)
      : rule_(&rule), g_(rule.geometry()), depth_(window + horizon * rule.radius()) {
    const int r = rule.radius();
    for (int l = 0; l <= r; ++l)
      for (std::uint64_t w = 0; w < g_.level_size(l); ++w) layout_.emplace_back(g_.level_size(l), g_.delta_size(l) + w);
    const auto cells = g_.delta_size(depth_);
    checks_.resize(cells);
    for (int t = 0; t <= horizon; ++t)
      for (std::uint64_t v = 0; v < g_.delta_size(window); ++v)
        checks_[g_.level_size(t * r) * v + g_.delta_size(t * r + 1) - 1].emplace_back(t, v);
  }

  std::uint64_t cells() const noexcept { return checks_.size(); }

  Letter value(std::span<const Letter> cells, int t, std::uint64_t v) const {
    if (t == 0) return cells[v];
    std::uint64_t key = 0;
    const auto A = static_cast<std::uint64_t>(rule_->alphabet_size());
    for (const auto& [mul, add] : layout_) key = key * A + value(cells, t - 1, mul * v + add);
    return rule_->lookup_key(key);
  }

  /// Observations τ^t(cells)(v) in (t, v) order.
  std::vector<Letter> observe(std::span<const Letter> cells) const {
    std::vector<Letter> out;
    for (const auto& list : checks_)
      for (const auto& [t, v] : list) out.push_back(value(cells, t, v));
    return out;
  }

  /// Smallest base other than `skip` with observations `obs`, counting nodes in `work`.
  std::optional<std::vector<Letter>> partner(const std::vector<Letter>& obs, std::span<const Letter> skip,
                                             std::uint64_t& work, const Budget& budget) const {
    const auto n = cells();
    const int A = rule_->alphabet_size();
    std::vector<Letter> cells(n, 0);
    std::vector<std::size_t> obs_at(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) obs_at[j + 1] = obs_at[j] + checks_[j].size();
    std::vector<int> next(n, 0);
    std::size_t j = 0;
    while (true) {
      if (next[j] == A) {
        next[j] = 0;
        if (j == 0) return std::nullopt;
        --j;
        continue;
      }
      cells[j] = static_cast<Letter>(next[j]++);
      if (++work > budget.max_work) throw BudgetExceeded("expansivity search exceeded the work budget");
      bool ok = true;
      for (std::size_t c = 0; c < checks_[j].size() && ok; ++c)
        ok = value(cells, checks_[j][c].first, checks_[j][c].second) == obs[obs_at[j] + c];
      if (!ok) continue;
      if (j + 1 == n) {
        if (!std::equal(cells.begin(), cells.end(), skip.begin())) return cells;
        continue;
      }
      ++j;
    }
  }

 private:
  const LocalRule* rule_;
  TreeGeometry g_;
  int depth_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> layout_;
  std::vector<std::vector<std::pair<int, std::uint64_t>>> checks_;
};

}  // namespace

ExpansivityWitness expansivity_witness(const LocalRule& rule, int window, int horizon, const Budget& budget) {
  if (window < 1 || horizon < 0) throw InvalidInput("expansivity witness needs N >= 1 and T >= 0");
  if (rule.alphabet_size() == 1) throw NoWitness("a one-letter alphabet has a single configuration");
  const TrajectorySearch search(rule, window, horizon);
  const int depth = window + horizon * rule.radius();
  const int A = rule.alphabet_size();
  std::vector<Letter> first(search.cells(), 0);
  std::uint64_t work = 0;
  do {
    if (auto second = search.partner(search.observe(first), first, work, budget))
      return {window, horizon, Pattern(rule.geometry(), A, depth, first),
              Pattern(rule.geometry(), A, depth, std::move(*second))};
  } while (next_letters(first, A));
  throw NoWitness("no two bases of depth " + std::to_string(depth) + " share a Δ_" + std::to_string(window) +
                  " trajectory over " + std::to_string(horizon) + " steps");
}

bool verify_expansivity_witness(const LocalRule& rule, const ExpansivityWitness& w) {
  const int depth = w.window + w.horizon * rule.radius();
  if (w.first.depth() != depth || w.second.depth() != depth || w.first == w.second) return false;
  return trajectory(rule, w.first, w.window, w.horizon + 1).entries ==
         trajectory(rule, w.second, w.window, w.horizon + 1).entries;
}

}  // namespace treeca
