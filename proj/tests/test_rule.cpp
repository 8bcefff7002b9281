#include <doctest.h>

#include "treeca/error.hpp"
#include "treeca/rule.hpp"

using namespace treeca;

namespace {

Letter eval(const LocalRule& rule, const std::string& nb) {
  return rule_lookup(rule, parse_pattern(nb, rule.geometry(), rule.alphabet_size()));
}

const char* kXorChildren = R"(treeca-rule v1
# mu(p) = p(0) + p(1) mod 2
arity: 2
alphabet: 2
radius: 1
kind: table
000 -> 0
001 -> 1
010 -> 1
011 -> 0
100 -> 0
101 -> 1
110 -> 1
111 -> 0
)";

}  // namespace

TEST_CASE("built-in families") {
  const auto orr = builtin_rule("or-all", 2, 2, 1);
  CHECK(eval(orr, "000") == 0);
  CHECK(eval(orr, "010") == 1);
  const auto xc = builtin_rule("xor-children", 2, 2, 1);
  CHECK(eval(xc, "011") == 0);
  CHECK(eval(xc, "101") == 1);
  const auto xa = builtin_rule("xor-all", 2, 2, 1);
  CHECK(eval(xa, "111") == 1);
  const auto id = builtin_rule("identity", 3, 3, 1);
  CHECK(eval(id, "2012") == 2);
  const auto fc = builtin_rule("first-child", 1, 2, 1);
  CHECK(eval(fc, "01") == 1);
  const auto sm = builtin_rule("sum-mod", 2, 3, 1, {0, 2});
  CHECK(eval(sm, "212") == 1);
  CHECK(letters_to_string(xc.table(), 2) == "01100110");
  CHECK_THROWS_AS(builtin_rule("nope", 2, 2, 1), InvalidInput);
  CHECK_THROWS_AS(builtin_rule("sum-mod", 2, 2, 1), InvalidInput);
}

TEST_CASE("rule file parse and round trip") {
  const auto rule = parse_rule(kXorChildren);
  CHECK(rule == builtin_rule("xor-children", 2, 2, 1));
  CHECK(parse_rule(serialize_rule(rule)) == rule);
  const auto builtin = parse_rule("treeca-rule v1\narity: 2\nalphabet: 3\nradius: 1\nkind: builtin\nname: sum-mod\n"
                                  "positions: 0,1\n");
  CHECK(builtin == builtin_rule("sum-mod", 2, 3, 1, {0, 1}));
  CHECK(parse_rule(serialize_rule(builtin)) == builtin);
  const auto r2 = builtin_rule("or-all", 2, 2, 2);
  CHECK(parse_rule(serialize_rule(r2)) == r2);
}

TEST_CASE("rule file errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_rule(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("not a rule\n") == 1);
  CHECK(line_of("treeca-rule v1\narity: 2\nbogus: 1\n") == 3);
  CHECK(line_of("treeca-rule v1\narity: x\n") == 2);
  std::string dup = kXorChildren;
  dup += "111 -> 1\n";
  CHECK(line_of(dup) == 15);
  std::string missing = kXorChildren;
  missing.erase(missing.find("101 -> 1\n"), 9);
  CHECK_THROWS_AS(parse_rule(missing), ParseError);
  std::string bad_letter = kXorChildren;
  bad_letter.replace(bad_letter.find("111 -> 0"), 8, "111 -> 2");
  CHECK(line_of(bad_letter) == 14);
  CHECK_THROWS_AS(load_rule("/nonexistent/rule.txt"), InvalidInput);
}

TEST_CASE("rule space enumeration") {
  const RuleSpace space(2, 2, 1);
  CHECK(space.size() == 256);
  CHECK(letters_to_string(space.at(0).table(), 2) == "00000000");
  CHECK(letters_to_string(space.at(1).table(), 2) == "00000001");
  CHECK(letters_to_string(space.at(128).table(), 2) == "10000000");
  for (std::uint64_t i = 0; i < space.size(); ++i) CHECK(space.index_of(space.at(i)) == i);
  std::uint64_t n = 0;
  for (auto it = space.begin(); it != space.end(); ++it) ++n;
  CHECK(n == 256);
  CHECK(space.index_of(builtin_rule("identity", 2, 2, 1)) == 15);
  CHECK(RuleSpace(2, 2, 2).size() == kSaturated);
  CHECK_THROWS_AS(enumerate_rules(2, 2, 2, Budget{}), BudgetExceeded);
  CHECK_THROWS_AS(enumerate_rules(2, 2, 1, Budget{100}), BudgetExceeded);
}

TEST_CASE("table validation") {
  const TreeGeometry g(2);
  CHECK_THROWS_AS(LocalRule(g, 2, 1, std::vector<Letter>(7, 0)), InvalidInput);
  CHECK_THROWS_AS(LocalRule(g, 2, 1, std::vector<Letter>(8, 2)), InvalidInput);
  CHECK_THROWS_AS(LocalRule(g, 2, 0, std::vector<Letter>(2, 0)), InvalidInput);
  CHECK_THROWS_AS(rule_lookup(builtin_rule("or-all", 2, 2, 1), parse_pattern("0", g, 2)), ShapeError);
}
