#include <map>

#include "treeca/analysis.hpp"
#include "treeca/dynamics.hpp"
#include "treeca/error.hpp"
#include "treeca/kernels.hpp"

namespace treeca {

namespace {

struct Scratch {
  std::vector<Letter> cells, image;
};

std::uint64_t upow(int base, std::uint64_t exp) { return saturating_pow(static_cast<std::uint64_t>(base), exp); }

// Child tuples compatible with each (root letter, depth-(N+1) image block) for a radius-1
// rule: flags[(a·|Q| + Q)·|A|^k + c] is set when a ◁ c →μ Q.
class ExtensionTable {
 public:
  ExtensionTable(const LocalRule& rule, int window, const Budget& budget) : rule_(&rule), window_(window) {
    if (rule.radius() != 1)
      throw UnsupportedRule("the extension property is only established for radius 1, got radius " +
                            std::to_string(rule.radius()));
    if (window < 1) throw InvalidInput("window N must be at least 1");
    const auto& g = rule.geometry();
    const int A = rule.alphabet_size();
    const auto cells = g.delta_size(window + 2);
    image_cells_ = g.delta_size(window + 1);
    tuples_ = upow(A, static_cast<std::uint64_t>(g.arity()));
    images_ = upow(A, image_cells_);
    const auto total = upow(A, cells);
    budget.require(total, "extension property at N=" + std::to_string(window));
    budget.require(saturating_mul(saturating_mul(static_cast<std::uint64_t>(A), images_), tuples_),
                   "extension table");
    flags_.assign(static_cast<std::size_t>(A) * images_ * tuples_, 0);

    const auto root_div = upow(A, cells - 1);
    const auto child_div = upow(A, cells - 1 - static_cast<std::uint64_t>(g.arity()));
    const RuleEvaluator eval(rule);
    for_each_ordered(
        total, Scratch{std::vector<Letter>(cells), std::vector<Letter>(image_cells_)},
        [&](Scratch& s, std::uint64_t i) {
          letters_from_key(i, A, s.cells);
          eval.apply_into(s.cells, s.image);
          return letters_key(s.image, A);
        },
        [&](std::uint64_t i, std::uint64_t image) {
          const auto a = i / root_div;
          const auto c = (i / child_div) % tuples_;
          flags_[(a * images_ + image) * tuples_ + c] = 1;
        });
  }

  std::uint64_t images() const noexcept { return images_; }
  std::uint64_t tuples() const noexcept { return tuples_; }
  std::uint64_t image_cells() const noexcept { return image_cells_; }

  std::vector<std::uint64_t> compatible(std::uint64_t root, std::uint64_t image) const {
    std::vector<std::uint64_t> out;
    const auto base = (root * images_ + image) * tuples_;
    for (std::uint64_t c = 0; c < tuples_; ++c)
      if (flags_[base + c]) out.push_back(c);
    return out;
  }
  bool any(std::uint64_t root, std::uint64_t image) const {
    const auto base = (root * images_ + image) * tuples_;
    for (std::uint64_t c = 0; c < tuples_; ++c)
      if (flags_[base + c]) return true;
    return false;
  }

 private:
  const LocalRule* rule_;
  int window_;
  std::uint64_t image_cells_ = 0, tuples_ = 0, images_ = 0;
  std::vector<std::uint8_t> flags_;
};

}  // namespace

RightClosingResult right_closing_at(const LocalRule& rule, int window, const Budget& budget) {
  if (window < 1) throw InvalidInput("window N must be at least 1");
  if (rule.alphabet_size() == 1) return {Verdict::certified(window).with("note", "degenerate-alphabet"), {}};
  const auto& g = rule.geometry();
  const int A = rule.alphabet_size();
  const int r = rule.radius();
  const int observed = r * window;
  const int depth = observed + r;
  const auto cells = g.delta_size(depth);
  const auto image_cells = g.delta_size(observed);
  const auto total = upow(A, cells);
  budget.require(total, "right-closing check at N=" + std::to_string(window));
  if (!key_fits(A, image_cells)) throw BudgetExceeded("right-closing window too large for 64-bit keys");

  // Block index i has p = its top Δ_r digits and the children blocks right below.
  const auto p_div = upow(A, cells - g.delta_size(r));
  const auto child_div = upow(A, cells - g.delta_size(2 * r));
  const auto child_mod = upow(A, g.delta_size(2 * r) - g.delta_size(r));

  struct Bucket {
    std::uint64_t first;
    std::uint64_t child;
    std::optional<std::uint64_t> other;
  };
  std::map<std::pair<std::uint64_t, std::uint64_t>, Bucket> buckets;
  const RuleEvaluator eval(rule);
  for_each_ordered(
      total, Scratch{std::vector<Letter>(cells), std::vector<Letter>(image_cells)},
      [&](Scratch& s, std::uint64_t i) {
        letters_from_key(i, A, s.cells);
        eval.apply_into(s.cells, s.image);
        return letters_key(s.image, A);
      },
      [&](std::uint64_t i, std::uint64_t q) {
        const auto child = (i / child_div) % child_mod;
        auto [it, inserted] = buckets.try_emplace({i / p_div, q}, Bucket{i, child, std::nullopt});
        if (!inserted && !it->second.other && it->second.child != child) it->second.other = i;
      });

  for (const auto& [pq, bucket] : buckets) {
    if (!bucket.other) continue;
    RightClosingWitness w{pattern_from_key(g, A, r, pq.first), pattern_from_key(g, A, observed, pq.second),
                          pattern_from_key(g, A, depth, bucket.first), pattern_from_key(g, A, depth, *bucket.other)};
    auto verdict = Verdict::refuted(window, {to_string(w.p), to_string(w.q), to_string(w.g1), to_string(w.g2)})
                       .with("property", "right-closing");
    return {std::move(verdict), std::move(w)};
  }
  return {Verdict::certified(window).with("property", "right-closing"), {}};
}

RightClosingSummary right_closing_min_window(const LocalRule& rule, int max_window, const Budget& budget) {
  if (max_window < 1) throw InvalidInput("window bound must be at least 1");
  for (int n = 1; n <= max_window; ++n) {
    auto res = right_closing_at(rule, n, budget);
    if (res.verdict.status == Status::certified) return {std::move(res.verdict), n};
  }
  return {Verdict::evidence(max_window).with("property", "right-closing").with("note", "no-window-certifies"),
          std::nullopt};
}

ExtensionResult extension_property_check(const LocalRule& rule, int window, const Budget& budget) {
  if (rule.radius() != 1)
    throw UnsupportedRule("the extension property is only established for radius 1, got radius " +
                          std::to_string(rule.radius()));
  if (rule.alphabet_size() == 1) return {Verdict::certified(window).with("note", "degenerate-alphabet"), {}};
  const ExtensionTable table(rule, window, budget);
  const auto& g = rule.geometry();
  const int A = rule.alphabet_size();
  const auto leaf_count = g.level_size(window);
  const auto leaves = upow(A, leaf_count);

  for (std::uint64_t a = 0; a < static_cast<std::uint64_t>(A); ++a) {
    // a →μ q for q on Δ_N: some depth-(N+1) image extends q.
    std::vector<bool> reach(table.images() / leaves, false);
    for (std::uint64_t Q = 0; Q < table.images(); ++Q)
      if (table.any(a, Q)) reach[Q / leaves] = true;
    for (std::uint64_t Q = 0; Q < table.images(); ++Q) {
      if (!reach[Q / leaves]) continue;
      const auto count = table.compatible(a, Q).size();
      if (count == 1) continue;
      ExtensionFailure f{static_cast<Letter>(a), pattern_from_key(g, A, window, Q / leaves),
                         std::vector<Letter>(leaf_count), count};
      letters_from_key(Q % leaves, A, f.leaves);
      auto verdict = Verdict::refuted(window, {letters_to_string(std::span<const Letter>(&f.root, 1), A),
                                               to_string(f.q), letters_to_string(f.leaves, A)})
                         .with("property", "extension")
                         .with("solutions", std::to_string(count));
      return {std::move(verdict), std::move(f)};
    }
  }
  return {Verdict::certified(window).with("property", "extension"), {}};
}

Pattern closing_preimage_build(const LocalRule& rule, Letter root, const Pattern& target, int window,
                               const Budget& budget) {
  if (rule.radius() != 1)
    throw UnsupportedRule("closing preimage construction needs radius 1, got radius " +
                          std::to_string(rule.radius()));
  if (!(target.geometry() == rule.geometry()) || target.alphabet_size() != rule.alphabet_size())
    throw ShapeError("target and rule disagree on arity or alphabet");
  if (root >= rule.alphabet_size()) throw InvalidInput("root letter outside the alphabet");
  const int built = target.depth() - window;
  if (built < 1)
    throw ShapeError("target of depth " + std::to_string(target.depth()) + " leaves nothing to build at N=" +
                     std::to_string(window));
  const auto& g = rule.geometry();
  const int A = rule.alphabet_size();
  const Pattern single(g, A, 1, {root});
  if (!realizable(rule, single, restrict(target, window), budget))
    throw InvalidInput("precondition failed: root " + std::to_string(root) + " does not map onto the target's top Δ_" +
                       std::to_string(window));

  const ExtensionTable table(rule, window, budget);
  const int k = g.arity();
  std::vector<Letter> cells(g.delta_size(built + 1), 0);
  cells[0] = root;
  std::vector<Letter> tuple(static_cast<std::size_t>(k));
  for (std::uint64_t v = 0; v < g.delta_size(built); ++v) {
    const Word word = word_of_index(g, v);
    const auto seen = restrict(subtree(target, word), window + 1);
    const auto options = table.compatible(cells[v], pattern_key(seen));
    if (options.size() != 1)
      throw InconsistencyError("vertex " + to_string(word) + " has " + std::to_string(options.size()) +
                               " compatible child tuples; the extension property fails at N=" +
                               std::to_string(window));
    letters_from_key(options.front(), A, tuple);
    for (int s = 0; s < k; ++s) cells[g.child(v, s)] = tuple[static_cast<std::size_t>(s)];
  }
  return Pattern(g, A, built + 1, std::move(cells));
}

OpennessResult non_openness_evidence(const LocalRule& rule, Letter root, int m, int m_prime, const Budget& budget) {
  if (m < 1 || m_prime <= m) throw InvalidInput("openness evidence needs 1 <= m < m'");
  if (root >= rule.alphabet_size()) throw InvalidInput("root letter outside the alphabet");
  if (rule.alphabet_size() == 1) return {Verdict::evidence(m_prime).with("note", "degenerate-alphabet"), {}, {}};
  const auto& g = rule.geometry();
  const int A = rule.alphabet_size();
  const auto cells = g.delta_size(m_prime + rule.radius());
  const auto image_cells = g.delta_size(m_prime);
  const auto total = upow(A, cells);
  budget.require(total, "openness evidence at depth " + std::to_string(m_prime));
  if (!key_fits(A, image_cells)) throw BudgetExceeded("openness images too large for 64-bit keys");
  const auto images = upow(A, image_cells);
  budget.require(images, "openness image table");

  std::vector<std::uint8_t> from_any(images, 0), from_root(images, 0);
  const auto root_div = upow(A, cells - 1);
  const RuleEvaluator eval(rule);
  for_each_ordered(
      total, Scratch{std::vector<Letter>(cells), std::vector<Letter>(image_cells)},
      [&](Scratch& s, std::uint64_t i) {
        letters_from_key(i, A, s.cells);
        eval.apply_into(s.cells, s.image);
        return letters_key(s.image, A);
      },
      [&](std::uint64_t i, std::uint64_t q) {
        from_any[q] = 1;
        if (i / root_div == root) from_root[q] = 1;
      });

  // Depth-m blocks reachable from the root are the prefixes of depth-m' ones.
  const auto tail = upow(A, image_cells - g.delta_size(m));
  std::vector<std::uint8_t> short_from_root(images / tail, 0);
  for (std::uint64_t q = 0; q < images; ++q)
    if (from_root[q]) short_from_root[q / tail] = 1;

  for (std::uint64_t q = 0; q < images; ++q) {
    if (from_any[q] && !from_root[q] && short_from_root[q / tail]) {
      auto qp = pattern_from_key(g, A, m_prime, q);
      auto qs = restrict(qp, m);
      auto verdict = Verdict::refuted(m_prime, {to_string(qs), to_string(qp)})
                         .with("property", "open")
                         .with("root", std::to_string(root))
                         .with("scope", "cylinder-not-in-image");
      return {std::move(verdict), std::move(qs), std::move(qp)};
    }
  }
  return {Verdict::evidence(m_prime).with("property", "open").with("root", std::to_string(root)), {}, {}};
}

}  // namespace treeca
