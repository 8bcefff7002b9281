#pragma once

// Property checkers and witness searches for tree cellular automata.
//
// Conventions shared by every search:
//  * blocks are compared by level-order key (root most significant) unless noted;
//  * when several witnesses exist the smallest is reported, so results do not depend on
//    the number of worker threads;
//  * a rule over a one-letter alphabet is degenerate (there is a single configuration)
//    and every checker answers immediately with detail note=degenerate-alphabet.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treeca/budget.hpp"
#include "treeca/rule.hpp"
#include "treeca/tree.hpp"
#include "treeca/verdict.hpp"

namespace treeca {

// --- permutivity -------------------------------------------------------------------------

/// Certified iff a ↦ μ(a ◁ p) permutes A for every labeling p of Δ_(r+1) \ {ε}. A refutation
/// carries the smallest failing p, written as its non-root letters in level order.
Verdict is_permutive(const LocalRule& rule);

/// A preimage of `target` (depth n) whose levels n..n+r-1 are `filler` (level order), solved
/// bottom-up one vertex at a time through the permutation a ↦ μ(a ◁ ·).
/// Throws UnsupportedRule when the rule is not permutive.
Pattern permutive_preimage_build(const LocalRule& rule, const Pattern& target, std::span<const Letter> filler);

// --- surjectivity and balance ------------------------------------------------------------

struct OrphanResult {
  Verdict verdict;
  std::optional<Pattern> orphan;
};

/// Looks for a block with no preimage at depths 1..max_depth (smallest depth, then
/// smallest block). None found is bounded evidence of surjectivity.
OrphanResult orphan_search(const LocalRule& rule, int max_depth, const Budget& budget);

struct BalanceReport {
  int level = 0;
  /// |A|^(|Δ_(n+r)| - |Δ_n|), the mean number of preimages of a depth-n block.
  std::uint64_t expected = 0;
  std::uint64_t min_count = 0;
  std::uint64_t max_count = 0;
  Pattern min_block;
  Pattern max_block;
  /// Smallest block with more than `expected` preimages.
  std::optional<Pattern> over_witness;
  /// Smallest block with no preimage.
  std::optional<Pattern> orphan;
  /// Preimage count per block, indexed by block key.
  std::vector<std::uint64_t> counts;

  bool balanced() const noexcept { return min_count == expected && max_count == expected; }
};

BalanceReport balance_report(const LocalRule& rule, int level, const Budget& budget);

// --- preinjectivity ----------------------------------------------------------------------

/// Two distinct size-n blocks that agree with `boundary` on Δ_r and on vΔ_r for every
/// |v| = n - r, and have the same image.
struct Diamond {
  Pattern boundary;
  Pattern first;
  Pattern second;

  int size() const noexcept { return first.depth(); }
};

enum class DiamondMode {
  /// size must exceed 2r + 2
  strict,
  /// any size above r
  relaxed,
};

/// Replays the diamond definition directly. On failure, `why` (when given) names the
/// violated condition.
bool verify_diamond(const LocalRule& rule, const Diamond& d, DiamondMode mode, std::string* why = nullptr);

struct DiamondResult {
  Verdict verdict;
  std::optional<Diamond> diamond;
};

/// Exhaustive diamond search at one size: for each boundary block (ascending), the free
/// cells are enumerated and bucketed by image. The reported pair is the one whose first
/// block is smallest, then whose second block is smallest, comparing blocks
/// colexicographically (deepest cell most significant), which prefers pairs that differ
/// near the root.
DiamondResult diamond_search(const LocalRule& rule, int size, DiamondMode mode, const Budget& budget);

/// Builds a diamond by tiling preimages of an over-mean block q (|μ^{-1}(q)| above the mean):
/// a fixed top tile p ∈ μ^{-1}(q), m layers of free tiles from μ^{-1}(q), and a bottom
/// boundary of copies of p|Δ_r. The ξ^F composites map into at most mean^(F+1) images,
/// so for large m two of them collide. Sizes m = 1..max_layers are tried in turn.
/// Throws InvalidInput when q is not over-mean.
DiamondResult myhill_collision_search(const LocalRule& rule, const Pattern& q, int max_layers, const Budget& budget);

// --- right-closingness -------------------------------------------------------------------

struct RightClosingWitness {
  Pattern p;   // depth r
  Pattern q;   // depth r·N
  Pattern g1;  // depth r·N + r, extends p, image q on Δ_(rN)
  Pattern g2;  // as g1, with different children blocks
};

struct RightClosingResult {
  Verdict verdict;
  std::optional<RightClosingWitness> witness;
};

/// Certified iff whenever p →μ q (p on Δ_r, q on Δ_(rN)) the letters on Δ_2r \ Δ_r are
/// determined. A refutation carries the smallest (p, q) and two disagreeing extensions.
RightClosingResult right_closing_at(const LocalRule& rule, int window, const Budget& budget);

/// Smallest N ≤ max_window certified by right_closing_at (verdict bound = N), else bounded
/// evidence against right-closingness up to max_window.
struct RightClosingSummary {
  Verdict verdict;
  std::optional<int> minimal_window;
};
RightClosingSummary right_closing_min_window(const LocalRule& rule, int max_window, const Budget& budget);

// --- openness (radius 1) -----------------------------------------------------------------

struct ExtensionFailure {
  Letter root = 0;
  Pattern q;                  // depth N
  std::vector<Letter> leaves;  // b_1..b_(k^N)
  std::uint64_t solutions = 0;
};

struct ExtensionResult {
  Verdict verdict;
  std::optional<ExtensionFailure> failure;
};

/// Radius 1 only: for every a →μ q (q on Δ_N) and every leaf tuple b, exactly one child
/// tuple (a_1..a_k) satisfies a ◁ (a_i) →μ q ◁ b. Throws UnsupportedRule for r ≠ 1.
ExtensionResult extension_property_check(const LocalRule& rule, int window, const Budget& budget);

/// Radius 1 only: a depth-(D+1) block g with g(ε) = root whose image is target|Δ_D, where
/// target has depth N + D. Built level by level, each vertex's children being the unique
/// tuple compatible with the target seen from that vertex. Requires the extension property
/// at `window` = N; throws InconsistencyError naming the vertex where uniqueness fails.
Pattern closing_preimage_build(const LocalRule& rule, Letter root, const Pattern& target, int window,
                               const Budget& budget);

struct OpennessResult {
  Verdict verdict;
  std::optional<Pattern> q;        // depth m, an image block from root a
  std::optional<Pattern> q_prime;  // depth m', extends q, an image block but not from root a
};

/// Bounded look for a block q ∈ τ(C(a))|Δ_m whose cylinder is not inside τ(C(a)) at depth m':
/// an extension q' of q realizable from some root letter but not from a.
OpennessResult non_openness_evidence(const LocalRule& rule, Letter root, int m, int m_prime, const Budget& budget);

// --- expansiveness -----------------------------------------------------------------------

struct ExpansivityWitness {
  int window = 0;
  int horizon = 0;
  Pattern first;   // depth N + T·r
  Pattern second;  // same depth, distinct, same Δ_N observations for t = 0..T
};

/// Two distinct bases whose Δ_N trajectories coincide for T + 1 steps: a finite refutation
/// of positive expansiveness with constant N up to horizon T. Smallest first base, then
/// smallest second. Throws NoWitness when none exists at this depth.
ExpansivityWitness expansivity_witness(const LocalRule& rule, int window, int horizon, const Budget& budget);

/// Replays an expansivity witness from the definition.
bool verify_expansivity_witness(const LocalRule& rule, const ExpansivityWitness& w);

}  // namespace treeca
