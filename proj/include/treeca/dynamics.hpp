#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "treeca/budget.hpp"
#include "treeca/rule.hpp"
#include "treeca/tree.hpp"

namespace treeca {

/// Evaluates μ at arbitrary vertices of a level-order letter array.
///
/// The neighborhood cell w of vertex i sits at k^|w|·i + index(w), so one multiplier and
/// one offset per neighborhood cell are enough.
class RuleEvaluator {
 public:
  explicit RuleEvaluator(const LocalRule& rule);

  const LocalRule& rule() const noexcept { return *rule_; }

  std::uint64_t key_at(std::span<const Letter> cells, std::uint64_t vertex) const noexcept {
    std::uint64_t key = 0;
    for (const auto& [mul, add] : layout_) key = key * base_ + cells[mul * vertex + add];
    return key;
  }
  Letter at(std::span<const Letter> cells, std::uint64_t vertex) const noexcept {
    return rule_->lookup_key(key_at(cells, vertex));
  }
  /// Index of the last neighborhood cell of `vertex` (its completion point in level order).
  std::uint64_t last_cell(std::uint64_t vertex) const noexcept {
    return layout_.back().first * vertex + layout_.back().second;
  }
  /// Writes the image of a depth-`depth` letter array (depth > r) into `out`
  /// (size |Δ_(depth-r)|).
  void apply_into(std::span<const Letter> cells, std::span<Letter> out) const noexcept {
    for (std::uint64_t v = 0; v < out.size(); ++v) out[v] = at(cells, v);
  }

 private:
  const LocalRule* rule_;
  std::uint64_t base_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> layout_;
};

/// τ on a block: depth n ↦ depth n - r. Throws ShapeError when n ≤ r.
Pattern apply(const LocalRule& rule, const Pattern& p);
/// τ^steps on a block: depth n ↦ depth n - steps·r.
Pattern iterate(const LocalRule& rule, const Pattern& p, int steps);

/// (τ^i(f)|Δ_n)_{i < steps} for the base block f.
struct TrajectoryTuple {
  int observation_depth = 0;
  std::vector<Pattern> entries;
};
TrajectoryTuple trajectory(const LocalRule& rule, const Pattern& base, int observation_depth, int steps);

struct TrajectoryStats {
  int observation_depth = 0;
  int steps = 0;
  /// |P(τ, n, steps)|
  std::uint64_t distinct_count = 0;
  /// |P(τ, n, t')| for t' = 1..steps
  std::vector<std::uint64_t> counts;
  /// log|P(τ, n, t')| / t' (natural log) for t' = 1..steps
  std::vector<double> entropy_estimates;
};

/// Exact |P(τ, n, t)| and its entropy estimates.
///
/// Counted by recursion on subtrees rather than by enumerating base blocks: the children of
/// the root evolve independently, and the root column at time i+1 is μ of the root at time i
/// together with the children's Δ_r blocks at time i.
TrajectoryStats trajectory_set(const LocalRule& rule, int observation_depth, int steps, const Budget& budget);

/// Depth-first search over the cells of a domain block (level order, ascending letters)
/// for blocks whose image matches a target on Δ_m. Cells may be pinned. Image cells are
/// checked as soon as their neighborhood is complete, so solutions come out in ascending
/// key order.
class PreimageSearch {
 public:
  PreimageSearch(const LocalRule& rule, const Pattern& target, int domain_depth);

  void pin(std::uint64_t cell, Letter letter);
  /// Pins Δ_n of the domain to `prefix`.
  void pin_prefix(const Pattern& prefix);

  /// Calls visit(letters) for each solution until it returns false. Throws BudgetExceeded
  /// once more than budget.max_work search nodes have been expanded.
  void run(const std::function<bool(std::span<const Letter>)>& visit, const Budget& budget) const;

  std::optional<Pattern> first(const Budget& budget) const;
  std::uint64_t count(const Budget& budget) const;

 private:
  const LocalRule* rule_;
  RuleEvaluator eval_;
  std::vector<Letter> target_;
  int domain_depth_;
  std::vector<int> pinned_;
  // checks_[j]: image vertex completed by cell j, or -1
  std::vector<std::int64_t> checks_;
};

/// { g of depth n + r : apply(g) = q } in ascending key order.
std::vector<Pattern> preimage_enumerate(const LocalRule& rule, const Pattern& q, const Budget& budget);
std::uint64_t count_preimages(const LocalRule& rule, const Pattern& q, const Budget& budget);

/// p →μ q: some block g of depth max(n, m + r) extends p and maps onto q on Δ_m.
bool realizable(const LocalRule& rule, const Pattern& p, const Pattern& q, const Budget& budget);

}  // namespace treeca
