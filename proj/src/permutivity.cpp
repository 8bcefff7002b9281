#include <vector>

#include "treeca/analysis.hpp"
#include "treeca/dynamics.hpp"
#include "treeca/error.hpp"

namespace treeca {

Verdict is_permutive(const LocalRule& rule) {
  if (rule.alphabet_size() == 1) return Verdict::certified(rule.radius() + 1).with("note", "degenerate-alphabet");
  const auto alphabet = static_cast<std::uint64_t>(rule.alphabet_size());
  const auto boundary_cells = rule.neighborhood_size() - 1;
  const auto boundaries = saturating_pow(alphabet, boundary_cells);
  std::vector<bool> hit(alphabet);
  for (std::uint64_t b = 0; b < boundaries; ++b) {
    std::fill(hit.begin(), hit.end(), false);
    bool bijective = true;
    for (std::uint64_t a = 0; a < alphabet && bijective; ++a) {
      const Letter out = rule.lookup_key(a * boundaries + b);
      bijective = !hit[out];
      hit[out] = true;
    }
    if (!bijective) {
      std::vector<Letter> letters(boundary_cells);
      letters_from_key(b, rule.alphabet_size(), letters);
      return Verdict::refuted(rule.radius() + 1, {letters_to_string(letters, rule.alphabet_size())});
    }
  }
  return Verdict::certified(rule.radius() + 1);
}

Pattern permutive_preimage_build(const LocalRule& rule, const Pattern& target, std::span<const Letter> filler) {
  if (is_permutive(rule).status != Status::certified)
    throw UnsupportedRule("rule '" + rule.name() + "' is not permutive; backward filling needs permutivity");
  if (!(target.geometry() == rule.geometry()) || target.alphabet_size() != rule.alphabet_size())
    throw ShapeError("target and rule disagree on arity or alphabet");
  const auto& g = rule.geometry();
  const int n = target.depth();
  const auto top = g.delta_size(n);
  const auto total = g.delta_size(n + rule.radius());
  if (filler.size() != total - top)
    throw ShapeError("filler for levels " + std::to_string(n) + ".." + std::to_string(n + rule.radius() - 1) +
                     " needs " + std::to_string(total - top) + " letters, got " + std::to_string(filler.size()));

  std::vector<Letter> cells(total, 0);
  for (std::uint64_t i = 0; i < filler.size(); ++i) {
    if (filler[i] >= rule.alphabet_size()) throw ShapeError("filler letter outside the alphabet");
    cells[top + i] = filler[i];
  }
  // Every vertex below v in level order is already fixed when v is solved.
  const RuleEvaluator eval(rule);
  for (std::uint64_t v = top; v-- > 0;) {
    bool solved = false;
    for (int a = 0; a < rule.alphabet_size() && !solved; ++a) {
      cells[v] = static_cast<Letter>(a);
      solved = eval.at(cells, v) == target[v];
    }
    if (!solved) throw InconsistencyError("no letter solves vertex " + to_string(word_of_index(g, v)));
  }
  return Pattern(g, rule.alphabet_size(), n + rule.radius(), std::move(cells));
}

}  // namespace treeca
