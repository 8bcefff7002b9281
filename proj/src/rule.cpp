#include "treeca/rule.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "treeca/error.hpp"

namespace treeca {

namespace {

constexpr std::array<std::pair<RuleKind, std::string_view>, 7> kKindNames{{
    {RuleKind::table, "table"},
    {RuleKind::or_all, "or-all"},
    {RuleKind::xor_children, "xor-children"},
    {RuleKind::xor_all, "xor-all"},
    {RuleKind::identity, "identity"},
    {RuleKind::first_child, "first-child"},
    {RuleKind::sum_mod, "sum-mod"},
}};

std::uint64_t table_length_for(const TreeGeometry& g, int alphabet_size, int radius) {
  const auto cells = g.delta_size(radius + 1);
  const auto len = saturating_pow(static_cast<std::uint64_t>(alphabet_size), cells);
  if (len == kSaturated || len > (std::uint64_t{1} << 32))
    throw InvalidInput("rule table for arity " + std::to_string(g.arity()) + ", alphabet " +
                       std::to_string(alphabet_size) + ", radius " + std::to_string(radius) +
                       " is too large to store");
  return len;
}

void check_shape(int alphabet_size, int radius) {
  if (alphabet_size < 1 || alphabet_size > kMaxAlphabet)
    throw InvalidInput("alphabet size must be in 1.." + std::to_string(kMaxAlphabet));
  if (radius < 1) throw InvalidInput("radius must be at least 1");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view text, int line, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(line, "invalid " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

}  // namespace

LocalRule::LocalRule(TreeGeometry geometry, int alphabet_size, int radius, std::vector<Letter> table,
                     std::string name)
    : geometry_(geometry), alphabet_size_(alphabet_size), radius_(radius), table_(std::move(table)),
      name_(std::move(name)) {
  check_shape(alphabet_size, radius);
  neighborhood_size_ = geometry_.delta_size(radius + 1);
  const auto expected = table_length_for(geometry_, alphabet_size, radius);
  if (table_.size() != expected)
    throw ShapeError("rule table needs " + std::to_string(expected) + " entries, got " +
                     std::to_string(table_.size()));
  for (Letter a : table_)
    if (a >= alphabet_size) throw ShapeError("rule table entry " + std::to_string(a) + " outside the alphabet");
}

Letter LocalRule::lookup(std::span<const Letter> neighborhood) const {
  if (neighborhood.size() != neighborhood_size_) throw ShapeError("neighborhood has the wrong size");
  return table_[letters_key(neighborhood, alphabet_size_)];
}

bool LocalRule::operator==(const LocalRule& other) const {
  return geometry_ == other.geometry_ && alphabet_size_ == other.alphabet_size_ && radius_ == other.radius_ &&
         table_ == other.table_;
}

Letter rule_lookup(const LocalRule& rule, const Pattern& neighborhood) {
  if (!(neighborhood.geometry() == rule.geometry()) || neighborhood.alphabet_size() != rule.alphabet_size() ||
      neighborhood.depth() != rule.radius() + 1)
    throw ShapeError("neighborhood must be a depth-" + std::to_string(rule.radius() + 1) +
                     " pattern over the rule's alphabet and arity");
  return rule.lookup(neighborhood.letters());
}

std::string_view to_string(RuleKind kind) {
  for (auto [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

std::optional<RuleKind> rule_kind_from_name(std::string_view name) {
  for (auto [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

LocalRule expand(const RuleFamily& family, TreeGeometry geometry, int alphabet_size, int radius) {
  check_shape(alphabet_size, radius);
  const auto cells = geometry.delta_size(radius + 1);
  const auto length = table_length_for(geometry, alphabet_size, radius);
  const int k = geometry.arity();

  std::vector<std::uint64_t> positions;
  switch (family.kind) {
    case RuleKind::table:
      throw InvalidInput("the table kind has no formula to expand");
    case RuleKind::xor_children:
      for (int s = 0; s < k; ++s) positions.push_back(static_cast<std::uint64_t>(s) + 1);
      break;
    case RuleKind::xor_all:
      for (std::uint64_t i = 0; i < cells; ++i) positions.push_back(i);
      break;
    case RuleKind::sum_mod:
      positions = family.positions;
      if (positions.empty()) throw InvalidInput("sum-mod needs at least one position");
      break;
    default:
      break;
  }
  for (auto p : positions)
    if (p >= cells)
      throw InvalidInput("position " + std::to_string(p) + " is outside the radius-" + std::to_string(radius) +
                         " neighborhood");

  std::vector<Letter> table(length);
  std::vector<Letter> nb(cells, 0);
  for (std::uint64_t key = 0; key < length; ++key) {
    letters_from_key(key, alphabet_size, nb);
    Letter out = 0;
    switch (family.kind) {
      case RuleKind::or_all:
        out = std::any_of(nb.begin(), nb.end(), [](Letter a) { return a != 0; }) ? 1 : 0;
        break;
      case RuleKind::identity:
        out = nb[0];
        break;
      case RuleKind::first_child:
        out = nb[1];
        break;
      case RuleKind::xor_children:
      case RuleKind::xor_all:
      case RuleKind::sum_mod: {
        unsigned sum = 0;
        for (auto p : positions) sum += nb[p];
        out = static_cast<Letter>(sum % static_cast<unsigned>(alphabet_size));
        break;
      }
      case RuleKind::table:
        break;
    }
    if (out >= alphabet_size) out = static_cast<Letter>(alphabet_size - 1);
    table[key] = out;
  }
  std::string name(to_string(family.kind));
  return LocalRule(geometry, alphabet_size, radius, std::move(table), std::move(name));
}

LocalRule builtin_rule(std::string_view name, int arity, int alphabet_size, int radius,
                       std::vector<std::uint64_t> positions) {
  const auto kind = rule_kind_from_name(name);
  if (!kind || *kind == RuleKind::table) throw InvalidInput("unknown built-in rule '" + std::string(name) + "'");
  return expand(RuleFamily{*kind, std::move(positions)}, TreeGeometry(arity), alphabet_size, radius);
}

// ---------------------------------------------------------------------------

LocalRule parse_rule(std::string_view text) {
  std::optional<int> arity, alphabet, radius;
  std::optional<std::string> kind, name;
  std::optional<std::vector<std::uint64_t>> positions;
  struct Entry {
    int line;
    std::string key, value;
  };
  std::vector<Entry> entries;

  int line_no = 0;
  bool saw_magic = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (!saw_magic) {
      if (line != "treeca-rule v1") throw ParseError(line_no, "expected header 'treeca-rule v1'");
      saw_magic = true;
      continue;
    }
    if (const auto arrow = line.find("->"); arrow != std::string_view::npos) {
      entries.push_back({line_no, std::string(trim(line.substr(0, arrow))), std::string(trim(line.substr(arrow + 2)))});
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected 'key: value' or 'digits -> digit'");
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));
    auto set_once = [&](auto& slot, auto v) {
      if (slot) throw ParseError(line_no, "duplicate header '" + std::string(key) + "'");
      slot = std::move(v);
    };
    if (key == "arity") set_once(arity, parse_int(value, line_no, "arity"));
    else if (key == "alphabet") set_once(alphabet, parse_int(value, line_no, "alphabet"));
    else if (key == "radius") set_once(radius, parse_int(value, line_no, "radius"));
    else if (key == "kind") set_once(kind, std::string(value));
    else if (key == "name") set_once(name, std::string(value));
    else if (key == "positions") {
      std::vector<std::uint64_t> ps;
      std::string list(value);
      std::replace(list.begin(), list.end(), ',', ' ');
      std::istringstream in{list};
      std::string tok;
      while (in >> tok) {
        ps.push_back(static_cast<std::uint64_t>(parse_int(tok, line_no, "position")));
      }
      set_once(positions, std::move(ps));
    } else {
      throw ParseError(line_no, "unknown header '" + std::string(key) + "'");
    }
  }
  if (!saw_magic) throw ParseError(0, "empty rule file");
  if (!arity) throw ParseError(0, "missing header 'arity'");
  if (!alphabet) throw ParseError(0, "missing header 'alphabet'");
  if (!radius) throw ParseError(0, "missing header 'radius'");
  if (!kind) throw ParseError(0, "missing header 'kind'");

  TreeGeometry g = [&] {
    try {
      return TreeGeometry(*arity);
    } catch (const Error& e) {
      throw ParseError(0, e.what());
    }
  }();
  check_shape(*alphabet, *radius);

  if (*kind == "builtin") {
    if (!name) throw ParseError(0, "builtin rules need a 'name' header");
    if (!entries.empty()) throw ParseError(entries.front().line, "builtin rules take no table entries");
    const auto k = rule_kind_from_name(*name);
    if (!k || *k == RuleKind::table) throw ParseError(0, "unknown built-in rule '" + *name + "'");
    if (positions && *k != RuleKind::sum_mod) throw ParseError(0, "'positions' only applies to sum-mod");
    return expand(RuleFamily{*k, positions.value_or(std::vector<std::uint64_t>{})}, g, *alphabet, *radius);
  }
  if (*kind != "table") throw ParseError(0, "kind must be 'table' or 'builtin', got '" + *kind + "'");
  if (positions) throw ParseError(0, "'positions' only applies to builtin sum-mod");

  const auto length = table_length_for(g, *alphabet, *radius);
  const auto cells = g.delta_size(*radius + 1);
  std::vector<int> table(length, -1);
  for (const auto& e : entries) {
    std::vector<Letter> nb;
    std::vector<Letter> out;
    try {
      nb = parse_letters(e.key, *alphabet);
      out = parse_letters(e.value, *alphabet);
    } catch (const InvalidInput& err) {
      throw ParseError(e.line, err.what());
    }
    if (nb.size() != cells)
      throw ParseError(e.line, "neighborhood '" + e.key + "' must have " + std::to_string(cells) + " letters");
    if (out.size() != 1) throw ParseError(e.line, "output must be a single letter");
    const auto key = letters_key(nb, *alphabet);
    if (table[key] >= 0) throw ParseError(e.line, "duplicate key '" + e.key + "'");
    table[key] = out[0];
  }
  std::vector<Letter> dense(length);
  std::vector<Letter> nb(cells);
  for (std::uint64_t key = 0; key < length; ++key) {
    if (table[key] < 0) {
      letters_from_key(key, *alphabet, nb);
      throw ParseError(0, "missing key '" + letters_to_string(nb, *alphabet) + "'");
    }
    dense[key] = static_cast<Letter>(table[key]);
  }
  return LocalRule(g, *alphabet, *radius, std::move(dense), name.value_or(""));
}

LocalRule load_rule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open rule file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_rule(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

std::string serialize_rule(const LocalRule& rule) {
  std::ostringstream out;
  out << "treeca-rule v1\n";
  out << "arity: " << rule.arity() << "\n";
  out << "alphabet: " << rule.alphabet_size() << "\n";
  out << "radius: " << rule.radius() << "\n";
  out << "kind: table\n";
  if (!rule.name().empty()) out << "name: " << rule.name() << "\n";
  std::vector<Letter> nb(rule.neighborhood_size());
  const auto table = rule.table();
  for (std::uint64_t key = 0; key < table.size(); ++key) {
    letters_from_key(key, rule.alphabet_size(), nb);
    out << letters_to_string(nb, rule.alphabet_size()) << " -> "
        << letters_to_string(std::span<const Letter>(&table[key], 1), rule.alphabet_size()) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

RuleSpace::RuleSpace(int arity, int alphabet_size, int radius)
    : geometry_(arity), alphabet_size_(alphabet_size), radius_(radius) {
  check_shape(alphabet_size, radius);
  const auto cells = geometry_.delta_size(radius + 1);
  table_length_ = saturating_pow(static_cast<std::uint64_t>(alphabet_size), cells);
  size_ = table_length_ == kSaturated ? kSaturated
                                      : saturating_pow(static_cast<std::uint64_t>(alphabet_size), table_length_);
}

LocalRule RuleSpace::at(std::uint64_t index) const {
  if (index >= size_) throw InvalidInput("rule index " + std::to_string(index) + " out of range");
  std::vector<Letter> table(table_length_);
  letters_from_key(index, alphabet_size_, table);
  return LocalRule(geometry_, alphabet_size_, radius_, std::move(table), "rule-" + std::to_string(index));
}

std::uint64_t RuleSpace::index_of(const LocalRule& rule) const {
  if (!(rule.geometry() == geometry_) || rule.alphabet_size() != alphabet_size_ || rule.radius() != radius_)
    throw ShapeError("rule does not belong to this rule space");
  return letters_key(rule.table(), alphabet_size_);
}

RuleSpace enumerate_rules(int arity, int alphabet_size, int radius, const Budget& budget) {
  RuleSpace space(arity, alphabet_size, radius);
  budget.require(space.size(), "enumerating the rule space");
  return space;
}

}  // namespace treeca
