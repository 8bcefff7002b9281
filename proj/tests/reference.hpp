#pragma once

// Slow, definition-level reference implementations used to cross-check the library.
// Vertices are handled as words, never as level-order indices.

#include <set>
#include <string>
#include <vector>

#include "treeca/rule.hpp"
#include "treeca/tree.hpp"

namespace ref {

using treeca::Letter;
using treeca::LocalRule;
using treeca::Pattern;
using treeca::Word;

// All words of length < n, shortest first, lexicographic within a length.
inline std::vector<Word> words_below(int k, int n) {
  std::vector<Word> out{Word{}};
  std::vector<Word> level{Word{}};
  for (int l = 1; l < n; ++l) {
    std::vector<Word> next;
    for (const auto& w : level)
      for (int s = 0; s < k; ++s) {
        Word c = w;
        c.letters.push_back(s);
        next.push_back(c);
      }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

// τ(p)(v) = μ(p^v|Δ_(r+1)) for every v with |v| < n - r.
inline Pattern apply(const LocalRule& rule, const Pattern& p) {
  const int k = rule.arity();
  const auto nb = words_below(k, rule.radius() + 1);
  std::vector<Letter> out;
  for (const auto& v : words_below(k, p.depth() - rule.radius())) {
    std::vector<Letter> letters;
    for (const auto& w : nb) letters.push_back(p.at(v + w));
    out.push_back(rule.lookup(letters));
  }
  return Pattern(rule.geometry(), rule.alphabet_size(), p.depth() - rule.radius(), out);
}

// Every block of the given depth, in key order.
inline std::vector<Pattern> all_blocks(const treeca::TreeGeometry& g, int alphabet, int depth) {
  std::vector<Pattern> out;
  std::vector<Letter> letters(g.delta_size(depth), 0);
  do out.emplace_back(g, alphabet, depth, letters);
  while (treeca::next_letters(letters, alphabet));
  return out;
}

inline std::vector<Pattern> preimages(const LocalRule& rule, const Pattern& q) {
  std::vector<Pattern> out;
  for (auto& g : all_blocks(rule.geometry(), rule.alphabet_size(), q.depth() + rule.radius()))
    if (apply(rule, g) == q) out.push_back(g);
  return out;
}

// |P(τ, n, t)| straight from the definition.
inline std::size_t trajectory_count(const LocalRule& rule, int n, int t) {
  std::set<std::string> seen;
  for (auto f : all_blocks(rule.geometry(), rule.alphabet_size(), n + (t - 1) * rule.radius())) {
    std::string key;
    for (int i = 0; i < t; ++i) {
      key += treeca::to_string(treeca::restrict(f, n)) + "|";
      if (i + 1 < t) f = apply(rule, f);
    }
    seen.insert(key);
  }
  return seen.size();
}

}  // namespace ref
