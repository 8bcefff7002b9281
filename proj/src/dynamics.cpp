#include "treeca/dynamics.hpp"

#include "treeca/error.hpp"

namespace treeca {

RuleEvaluator::RuleEvaluator(const LocalRule& rule)
    : rule_(&rule), base_(static_cast<std::uint64_t>(rule.alphabet_size())) {
  const auto& g = rule.geometry();
  for (int l = 0; l <= rule.radius(); ++l) {
    const auto mul = g.level_size(l);
    const auto first = g.delta_size(l);
    for (std::uint64_t rank = 0; rank < g.level_size(l); ++rank) layout_.emplace_back(mul, first + rank);
  }
}

namespace {

void check_compatible(const LocalRule& rule, const Pattern& p) {
  if (!(p.geometry() == rule.geometry()) || p.alphabet_size() != rule.alphabet_size())
    throw ShapeError("pattern and rule disagree on arity or alphabet");
}

}  // namespace

Pattern apply(const LocalRule& rule, const Pattern& p) {
  check_compatible(rule, p);
  if (p.depth() <= rule.radius())
    throw ShapeError("support exhausted: a depth-" + std::to_string(p.depth()) + " block has no image under radius " +
                     std::to_string(rule.radius()));
  const int depth = p.depth() - rule.radius();
  std::vector<Letter> out(rule.geometry().delta_size(depth));
  RuleEvaluator(rule).apply_into(p.letters(), out);
  return Pattern(rule.geometry(), rule.alphabet_size(), depth, std::move(out));
}

Pattern iterate(const LocalRule& rule, const Pattern& p, int steps) {
  if (steps < 0) throw InvalidInput("negative step count");
  if (p.depth() <= steps * rule.radius())
    throw ShapeError("support exhausted: " + std::to_string(steps) + " steps need depth above " +
                     std::to_string(steps * rule.radius()));
  Pattern cur = p;
  for (int i = 0; i < steps; ++i) cur = apply(rule, cur);
  return cur;
}

TrajectoryTuple trajectory(const LocalRule& rule, const Pattern& base, int observation_depth, int steps) {
  if (observation_depth < 1 || steps < 1) throw InvalidInput("trajectory needs n >= 1 and t >= 1");
  if (base.depth() < observation_depth + (steps - 1) * rule.radius())
    throw ShapeError("base block too shallow for the requested trajectory");
  TrajectoryTuple out{observation_depth, {}};
  Pattern cur = base;
  for (int i = 0; i < steps; ++i) {
    out.entries.push_back(restrict(cur, observation_depth));
    if (i + 1 < steps) cur = apply(rule, cur);
  }
  return out;
}

// ---------------------------------------------------------------------------

PreimageSearch::PreimageSearch(const LocalRule& rule, const Pattern& target, int domain_depth)
    : rule_(&rule), eval_(rule), target_(target.letters().begin(), target.letters().end()),
      domain_depth_(domain_depth) {
  check_compatible(rule, target);
  if (domain_depth < target.depth() + rule.radius())
    throw ShapeError("domain depth " + std::to_string(domain_depth) + " cannot determine a depth-" +
                     std::to_string(target.depth()) + " image");
  const auto cells = rule.geometry().delta_size(domain_depth);
  pinned_.assign(cells, -1);
  checks_.assign(cells, -1);
  for (std::uint64_t v = 0; v < target_.size(); ++v) checks_[eval_.last_cell(v)] = static_cast<std::int64_t>(v);
}

void PreimageSearch::pin(std::uint64_t cell, Letter letter) {
  if (cell >= pinned_.size()) throw ShapeError("pinned cell outside the domain");
  if (letter >= rule_->alphabet_size()) throw ShapeError("pinned letter outside the alphabet");
  pinned_[cell] = letter;
}

void PreimageSearch::pin_prefix(const Pattern& prefix) {
  check_compatible(*rule_, prefix);
  if (prefix.depth() > domain_depth_) throw ShapeError("prefix deeper than the search domain");
  for (std::uint64_t i = 0; i < prefix.size(); ++i) pinned_[i] = prefix[i];
}

void PreimageSearch::run(const std::function<bool(std::span<const Letter>)>& visit, const Budget& budget) const {
  const auto n = pinned_.size();
  const int alphabet = rule_->alphabet_size();
  std::vector<Letter> cells(n, 0);
  std::uint64_t nodes = 0;

  auto first_letter = [&](std::size_t j) { return pinned_[j] >= 0 ? pinned_[j] : 0; };
  auto last_letter = [&](std::size_t j) { return pinned_[j] >= 0 ? pinned_[j] : alphabet - 1; };
  auto consistent = [&](std::size_t j) {
    const auto v = checks_[j];
    return v < 0 || eval_.at(cells, static_cast<std::uint64_t>(v)) == target_[static_cast<std::size_t>(v)];
  };

  // Iterative depth-first search; `j` is the cell being decided.
  std::size_t j = 0;
  cells[0] = static_cast<Letter>(first_letter(0));
  while (true) {
    if (++nodes > budget.max_work) budget.require(nodes, "preimage search");
    bool advance = consistent(j);
    if (advance) {
      if (j + 1 == n) {
        if (!visit(cells)) return;
      } else {
        ++j;
        cells[j] = static_cast<Letter>(first_letter(j));
        continue;
      }
    }
    // next sibling, backtracking as needed
    while (true) {
      if (cells[j] < last_letter(j)) {
        ++cells[j];
        break;
      }
      if (j == 0) return;
      --j;
    }
  }
}

std::optional<Pattern> PreimageSearch::first(const Budget& budget) const {
  std::optional<Pattern> out;
  run(
      [&](std::span<const Letter> cells) {
        out.emplace(rule_->geometry(), rule_->alphabet_size(), domain_depth_,
                    std::vector<Letter>(cells.begin(), cells.end()));
        return false;
      },
      budget);
  return out;
}

std::uint64_t PreimageSearch::count(const Budget& budget) const {
  std::uint64_t total = 0;
  run(
      [&](std::span<const Letter>) {
        ++total;
        return true;
      },
      budget);
  return total;
}

std::vector<Pattern> preimage_enumerate(const LocalRule& rule, const Pattern& q, const Budget& budget) {
  const int depth = q.depth() + rule.radius();
  PreimageSearch search(rule, q, depth);
  std::vector<Pattern> out;
  search.run(
      [&](std::span<const Letter> cells) {
        out.emplace_back(rule.geometry(), rule.alphabet_size(), depth, std::vector<Letter>(cells.begin(), cells.end()));
        return true;
      },
      budget);
  return out;
}

std::uint64_t count_preimages(const LocalRule& rule, const Pattern& q, const Budget& budget) {
  return PreimageSearch(rule, q, q.depth() + rule.radius()).count(budget);
}

bool realizable(const LocalRule& rule, const Pattern& p, const Pattern& q, const Budget& budget) {
  check_compatible(rule, p);
  const int depth = std::max(p.depth(), q.depth() + rule.radius());
  PreimageSearch search(rule, q, depth);
  search.pin_prefix(p);
  return search.first(budget).has_value();
}

}  // namespace treeca
