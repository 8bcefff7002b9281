#pragma once

#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeca/budget.hpp"
#include "treeca/tree.hpp"

namespace treeca {

/// Local map μ: A^(Δ_(r+1)) → A as a dense table.
///
/// The table key of a neighborhood is its level-order letters read as a base-|A| number,
/// p(ε) most significant. Formula rules are expanded into tables up front.
class LocalRule {
 public:
  LocalRule(TreeGeometry geometry, int alphabet_size, int radius, std::vector<Letter> table,
            std::string name = {});

  const TreeGeometry& geometry() const noexcept { return geometry_; }
  int arity() const noexcept { return geometry_.arity(); }
  int alphabet_size() const noexcept { return alphabet_size_; }
  int radius() const noexcept { return radius_; }
  /// |Δ_(r+1)|
  std::uint64_t neighborhood_size() const noexcept { return neighborhood_size_; }
  std::span<const Letter> table() const noexcept { return table_; }
  const std::string& name() const noexcept { return name_; }

  Letter lookup_key(std::uint64_t key) const noexcept { return table_[key]; }
  Letter lookup(std::span<const Letter> neighborhood) const;

  /// Same shape and table; names are labels only.
  bool operator==(const LocalRule& other) const;

 private:
  TreeGeometry geometry_;
  int alphabet_size_;
  int radius_;
  std::uint64_t neighborhood_size_;
  std::vector<Letter> table_;
  std::string name_;
};

/// μ(neighborhood); the pattern must have the rule's geometry, alphabet and depth r+1.
Letter rule_lookup(const LocalRule& rule, const Pattern& neighborhood);

enum class RuleKind { table, or_all, xor_children, xor_all, identity, first_child, sum_mod };

std::string_view to_string(RuleKind kind);
std::optional<RuleKind> rule_kind_from_name(std::string_view name);

struct RuleFamily {
  RuleKind kind = RuleKind::identity;
  /// Level-order neighborhood positions summed by sum_mod.
  std::vector<std::uint64_t> positions;
};

/// Expands a formula family into its table. RuleKind::table has no formula and is rejected.
LocalRule expand(const RuleFamily& family, TreeGeometry geometry, int alphabet_size, int radius);
LocalRule builtin_rule(std::string_view name, int arity, int alphabet_size, int radius,
                       std::vector<std::uint64_t> positions = {});

/// Rule file format v1. Errors carry the offending line number.
LocalRule parse_rule(std::string_view text);
LocalRule load_rule(const std::string& path);
/// Always emits the explicit table form, keys in ascending order.
std::string serialize_rule(const LocalRule& rule);

/// All rules for (k, |A|, r), indexed by the table read as a base-|A| integer with
/// entry 0 most significant.
class RuleSpace {
 public:
  RuleSpace(int arity, int alphabet_size, int radius);

  int arity() const noexcept { return geometry_.arity(); }
  int alphabet_size() const noexcept { return alphabet_size_; }
  int radius() const noexcept { return radius_; }
  std::uint64_t table_length() const noexcept { return table_length_; }
  /// Number of rules, kSaturated when it does not fit 64 bits.
  std::uint64_t size() const noexcept { return size_; }

  LocalRule at(std::uint64_t index) const;
  std::uint64_t index_of(const LocalRule& rule) const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = LocalRule;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const RuleSpace* space, std::uint64_t index) : space_(space), index_(index) {}
    LocalRule operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    void operator++(int) { ++index_; }
    bool operator==(const iterator& o) const { return index_ == o.index_; }
    std::uint64_t index() const noexcept { return index_; }

   private:
    const RuleSpace* space_ = nullptr;
    std::uint64_t index_ = 0;
  };
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  TreeGeometry geometry_;
  int alphabet_size_;
  int radius_;
  std::uint64_t table_length_;
  std::uint64_t size_;
};

/// The rule space, refused with BudgetExceeded when it holds more rules than the budget.
RuleSpace enumerate_rules(int arity, int alphabet_size, int radius, const Budget& budget);

}  // namespace treeca
