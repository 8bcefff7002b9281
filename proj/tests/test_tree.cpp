#include <doctest.h>

#include <random>

#include "reference.hpp"
#include "treeca/error.hpp"
#include "treeca/tree.hpp"

using namespace treeca;

namespace {

Pattern random_pattern(std::mt19937_64& rng, const TreeGeometry& g, int alphabet, int depth) {
  std::vector<Letter> letters(g.delta_size(depth));
  for (auto& l : letters) l = static_cast<Letter>(rng() % static_cast<unsigned>(alphabet));
  return Pattern(g, alphabet, depth, letters);
}

}  // namespace

TEST_CASE("level-order index of words") {
  const TreeGeometry g(2);
  CHECK(index_of_word(g, parse_word("e")) == 0);
  CHECK(index_of_word(g, parse_word("0")) == 1);
  CHECK(index_of_word(g, parse_word("1")) == 2);
  CHECK(index_of_word(g, parse_word("01")) == 4);
  CHECK(to_string(word_of_index(g, 4)) == "01");
  CHECK_THROWS_AS(index_of_word(g, parse_word("2")), InvalidInput);
}

TEST_CASE("delta sizes") {
  CHECK(TreeGeometry(2).delta_size(3) == 7);
  CHECK(TreeGeometry(3).delta_size(3) == 13);
  CHECK(TreeGeometry(1).delta_size(5) == 5);
  CHECK(TreeGeometry(2).delta_size(0) == 0);
  CHECK(TreeGeometry(2).level_size(4) == 16);
  CHECK_THROWS_AS(TreeGeometry(2).delta_size(70), ShapeError);
}

TEST_CASE("index round trip and concatenation law") {
  for (int k : {1, 2, 3, 4}) {
    const TreeGeometry g(k);
    for (std::uint64_t i = 0; i < 300; ++i) {
      const Word w = word_of_index(g, i);
      REQUIRE(index_of_word(g, w) == i);
      CHECK(g.level_of(i) == static_cast<int>(w.length()));
      CHECK(word_of_rank(g, static_cast<int>(w.length()), lexicographic_rank(g, w)) == w);
    }
    for (std::uint64_t i = 0; i < 40; ++i)
      for (std::uint64_t j = 0; j < 40; ++j) {
        const Word v = word_of_index(g, i), w = word_of_index(g, j);
        const auto kw = g.level_size(static_cast<int>(w.length()));
        CHECK(index_of_word(g, v + w) == kw * i + j);
      }
  }
}

TEST_CASE("descendants of a vertex are contiguous") {
  const TreeGeometry g(3);
  for (std::uint64_t v = 0; v < 13; ++v)
    for (int l = 0; l < 3; ++l)
      for (std::uint64_t r = 0; r < g.level_size(l); ++r)
        CHECK(g.descendant(v, l, r) == g.descendant(v, l, 0) + r);
}

TEST_CASE("pattern text forms") {
  const TreeGeometry g(2);
  const auto p = parse_pattern("0110011", g, 2);
  CHECK(p.depth() == 3);
  CHECK(p.at(parse_word("1")) == 1);
  CHECK(to_string(p) == "0110011");
  CHECK_THROWS_AS(parse_pattern("011001", g, 2), InvalidInput);
  CHECK_THROWS_AS(parse_pattern("0120011", g, 2), InvalidInput);
  CHECK_THROWS_AS(parse_pattern("", g, 2), InvalidInput);

  const auto wide = parse_pattern("11,0,10", g, 12);
  CHECK(wide[0] == 11);
  CHECK(to_string(wide) == "11,0,10");
  CHECK_THROWS_AS(parse_pattern("12,0,1", g, 12), InvalidInput);
}

TEST_CASE("subtree, restrict and graft") {
  const TreeGeometry g(2);
  const auto p = parse_pattern("0110011", g, 2);
  CHECK(to_string(subtree(p, parse_word("1"))) == "111");
  CHECK(to_string(subtree(p, parse_word("0"))) == "100");
  CHECK(to_string(restrict(p, 2)) == "011");
  CHECK_THROWS_AS(restrict(p, 4), ShapeError);

  std::mt19937_64 rng(7);
  for (int k : {1, 2, 3})
    for (int trial = 0; trial < 20; ++trial) {
      const TreeGeometry gk(k);
      const auto q = random_pattern(rng, gk, 3, 4);
      for (int n = 1; n < 4; ++n) {
        std::vector<Pattern> kids;
        for (std::uint64_t r = 0; r < gk.level_size(n); ++r) kids.push_back(subtree(q, word_of_rank(gk, n, r)));
        CHECK(graft(restrict(q, n), kids) == q);
      }
      // Subtree of a subtree is the subtree at the concatenated word.
      const auto v = word_of_index(gk, 1), w = word_of_index(gk, gk.delta_size(2) - 1);
      CHECK(subtree(subtree(q, v), w) == subtree(q, v + w));
      for (const auto& u : ref::words_below(k, 2)) CHECK(subtree(q, u)[0] == q.at(u));
    }
}

TEST_CASE("keys and ordering") {
  const TreeGeometry g(2);
  const auto p = parse_pattern("0110011", g, 2);
  CHECK(pattern_key(p) == 0b0110011);
  CHECK(pattern_from_key(g, 2, 3, 0b0110011) == p);
  CHECK(parse_pattern("0000000", g, 2) < p);
  CHECK(parse_pattern("1", g, 2) < parse_pattern("000", g, 2));
  std::vector<Letter> letters{0, 1, 1};
  CHECK(next_letters(letters, 2));
  CHECK(letters == std::vector<Letter>{1, 0, 0});
  std::vector<Letter> last{2, 2};
  CHECK_FALSE(next_letters(last, 3));
  CHECK(key_fits(2, 63));
  CHECK_FALSE(key_fits(2, 64));
  CHECK_THROWS_AS(pattern_key(Pattern::filled(g, 2, 7)), BudgetExceeded);
}

TEST_CASE("truncated distance is an ultrametric") {
  const TreeGeometry g(2);
  const auto a = parse_pattern("0110011", g, 2);
  CHECK(truncated_distance(a, a).level == 0);
  CHECK(truncated_distance(a, a.with(0, 1)).level == 1);
  CHECK(truncated_distance(a, a.with(1, 0)).value() == doctest::Approx(0.5));
  CHECK(truncated_distance(a, a.with(5, 0)).level == 3);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto x = random_pattern(rng, g, 2, 4), y = x, z = x;
    for (int j = 0; j < 3; ++j) {
      y = y.with(rng() % 15, static_cast<Letter>(rng() % 2));
      z = z.with(rng() % 15, static_cast<Letter>(rng() % 2));
    }
    const auto dxy = truncated_distance(x, y).value(), dyz = truncated_distance(y, z).value(),
               dxz = truncated_distance(x, z).value();
    CHECK(dxy == truncated_distance(y, x).value());
    CHECK(dxz <= std::max(dxy, dyz) + 1e-12);
  }
}

TEST_CASE("pattern validation") {
  const TreeGeometry g(2);
  CHECK_THROWS_AS(Pattern(g, 2, 2, {0, 1}), ShapeError);
  CHECK_THROWS_AS(Pattern(g, 2, 1, {2}), InvalidInput);
  CHECK_THROWS_AS(Pattern(g, 2, 0, {}), InvalidInput);
}
