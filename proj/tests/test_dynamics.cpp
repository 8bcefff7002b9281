#include <doctest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "treeca/dynamics.hpp"
#include "treeca/error.hpp"
#include "treeca/kernels.hpp"

using namespace treeca;

namespace {

Pattern P(const LocalRule& rule, const char* text) { return parse_pattern(text, rule.geometry(), rule.alphabet_size()); }

LocalRule random_rule(std::mt19937_64& rng, int k, int alphabet, int r) {
  const TreeGeometry g(k);
  std::vector<Letter> table(saturating_pow(static_cast<std::uint64_t>(alphabet), g.delta_size(r + 1)));
  for (auto& t : table) t = static_cast<Letter>(rng() % static_cast<unsigned>(alphabet));
  return LocalRule(g, alphabet, r, table);
}

Pattern random_pattern(std::mt19937_64& rng, const TreeGeometry& g, int alphabet, int depth) {
  std::vector<Letter> letters(g.delta_size(depth));
  for (auto& l : letters) l = static_cast<Letter>(rng() % static_cast<unsigned>(alphabet));
  return Pattern(g, alphabet, depth, letters);
}

}  // namespace

TEST_CASE("apply and iterate on the xor-children rule") {
  const auto xc = builtin_rule("xor-children", 2, 2, 1);
  CHECK(to_string(apply(xc, P(xc, "0110011"))) == "000");
  CHECK(to_string(apply(xc, P(xc, "0000010"))) == "001");
  CHECK(to_string(iterate(xc, P(xc, "0000010"), 2)) == "1");
  CHECK(iterate(xc, P(xc, "0110011"), 0) == P(xc, "0110011"));
  CHECK_THROWS_AS(apply(xc, P(xc, "0")), ShapeError);
  CHECK_THROWS_AS(iterate(xc, P(xc, "0110011"), 3), ShapeError);
}

TEST_CASE("apply agrees with the word-based reference") {
  std::mt19937_64 rng(1);
  for (int k : {1, 2, 3})
    for (int alphabet : {2, 3})
      for (int r : {1, 2}) {
        const auto rule = random_rule(rng, k, alphabet, r);
        for (int trial = 0; trial < 10; ++trial) {
          const auto p = random_pattern(rng, rule.geometry(), alphabet, r + 2);
          CHECK(apply(rule, p) == ref::apply(rule, p));
        }
      }
}

TEST_CASE("the global map commutes with the shift action") {
  const RuleSpace space(2, 2, 1);
  const TreeGeometry g(2);
  std::mt19937_64 rng(3);
  std::vector<Pattern> samples;
  for (int i = 0; i < 24; ++i) samples.push_back(random_pattern(rng, g, 2, 4));
  for (const auto& rule : space)
    for (const auto& p : samples) {
      const auto image = apply(rule, p);
      for (const char* v : {"0", "1", "00", "11"}) {
        const Word w = parse_word(v);
        if (static_cast<int>(w.length()) >= image.depth()) continue;
        REQUIRE(apply(rule, subtree(p, w)) == subtree(image, w));
      }
    }
}

TEST_CASE("trajectories") {
  const auto xc = builtin_rule("xor-children", 2, 2, 1);
  const auto t = trajectory(xc, P(xc, "0000011"), 1, 3);
  REQUIRE(t.entries.size() == 3);
  CHECK(to_string(t.entries[0]) == "0");
  CHECK(to_string(t.entries[1]) == "0");
  CHECK(to_string(t.entries[2]) == "0");
  CHECK_THROWS_AS(trajectory(xc, P(xc, "000"), 1, 3), ShapeError);

  const auto stats = trajectory_set(xc, 1, 2, Budget{});
  CHECK(stats.distinct_count == 4);
  CHECK(stats.counts == std::vector<std::uint64_t>{2, 4});
  CHECK(stats.entropy_estimates[1] == doctest::Approx(std::log(4.0) / 2));
}

TEST_CASE("trajectory counting recursion matches brute force") {
  const Budget budget{};
  const RuleSpace space(2, 2, 1);
  for (const auto& rule : space) {
    for (int t = 1; t <= 3; ++t) REQUIRE(parallel::trajectory_count(rule, 1, t, budget) == ref::trajectory_count(rule, 1, t));
    REQUIRE(parallel::trajectory_count(rule, 2, 2, budget) == serial::trajectory_count(rule, 2, 2, budget));
  }
  std::mt19937_64 rng(5);
  for (int k : {1, 2, 3})
    for (int alphabet : {2, 3})
      for (int r : {1, 2})
        for (int trial = 0; trial < 3; ++trial) {
          const auto rule = random_rule(rng, k, alphabet, r);
          for (int n = 1; n <= 2; ++n)
            for (int t = 1; t <= 3; ++t) {
              const auto cells = rule.geometry().delta_size(n + (t - 1) * r);
              if (saturating_pow(static_cast<std::uint64_t>(alphabet), cells) > (1u << 16)) continue;
              CHECK(parallel::trajectory_count(rule, n, t, budget) == serial::trajectory_count(rule, n, t, budget));
            }
        }
}

TEST_CASE("trajectory count bound and identity entropy") {
  const auto id = builtin_rule("identity", 2, 2, 1);
  const auto stats = trajectory_set(id, 1, 10, Budget{});
  for (int t = 0; t < 10; ++t) {
    CHECK(stats.counts[t] == 2);
    CHECK(stats.entropy_estimates[t] == doctest::Approx(std::log(2.0) / (t + 1)));
  }
  const RuleSpace space(2, 2, 1);
  for (const auto& rule : space)
    for (int n = 1; n <= 2; ++n) {
      const auto s = trajectory_set(rule, n, 4, Budget{});
      for (int t = 1; t <= 4; ++t) {
        const auto bound = saturating_pow(2, rule.geometry().delta_size(n) * static_cast<std::uint64_t>(t));
        CHECK(s.counts[t - 1] <= bound);
        if (t > 1) CHECK(s.counts[t - 1] >= s.counts[t - 2]);
      }
    }
}

TEST_CASE("preimage enumeration") {
  const auto orr = builtin_rule("or-all", 2, 2, 1);
  const auto zero = preimage_enumerate(orr, P(orr, "0"), Budget{});
  REQUIRE(zero.size() == 1);
  CHECK(to_string(zero[0]) == "000");
  CHECK(count_preimages(orr, P(orr, "1"), Budget{}) == 7);
  CHECK(count_preimages(orr, P(orr, "0010000"), Budget{}) == 0);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 12; ++trial) {
    const auto rule = random_rule(rng, trial % 3 + 1, 2, 1);
    const auto q = random_pattern(rng, rule.geometry(), 2, 2);
    const auto fast = preimage_enumerate(rule, q, Budget{});
    const auto slow = ref::preimages(rule, q);
    CHECK(fast == slow);
    CHECK(std::is_sorted(fast.begin(), fast.end()));
  }
  CHECK_THROWS_AS(preimage_enumerate(orr, Pattern::filled(orr.geometry(), 2, 4, 1), Budget{1000}), BudgetExceeded);
}

TEST_CASE("realizability") {
  const auto id = builtin_rule("identity", 2, 2, 1);
  CHECK(realizable(id, P(id, "0"), P(id, "011"), Budget{}));
  CHECK_FALSE(realizable(id, P(id, "1"), P(id, "011"), Budget{}));
  const auto orr = builtin_rule("or-all", 2, 2, 1);
  CHECK_FALSE(realizable(orr, P(orr, "1"), P(orr, "0"), Budget{}));
  CHECK(realizable(orr, P(orr, "0"), P(orr, "1"), Budget{}));
  CHECK(realizable(orr, P(orr, "011"), P(orr, "1"), Budget{}));
}

TEST_CASE("pinned preimage search") {
  const auto xc = builtin_rule("xor-children", 2, 2, 1);
  PreimageSearch search(xc, P(xc, "0"), 2);
  search.pin(1, 1);
  const auto first = search.first(Budget{});
  REQUIRE(first);
  CHECK(to_string(*first) == "011");
  CHECK(search.count(Budget{}) == 2);
}
