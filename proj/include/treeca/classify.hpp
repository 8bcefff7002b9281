#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treeca/analysis.hpp"
#include "treeca/budget.hpp"
#include "treeca/rule.hpp"

namespace treeca {

struct ClassifyBounds {
  int orphan_depth = 3;
  int balance_levels = 2;
  int diamond_size = 5;
  DiamondMode diamond_mode = DiamondMode::strict;
  int right_closing_max = 3;
  /// Checked for radius 1 only.
  int extension_max = 2;
};

/// One rule's property profile. Optional fields are empty when nothing was found within
/// the bounds; components that ran out of budget are listed in `incomplete` instead.
struct ClassificationRow {
  std::uint64_t rule_key = 0;
  std::string table;
  bool permutive = false;
  std::optional<int> orphan_depth;
  /// Largest n ≤ balance_levels with every level 1..n balanced.
  int balanced_up_to = 0;
  std::optional<int> diamond_size;
  std::optional<int> right_closing_N;
  std::optional<int> extension_property_N;
  std::vector<std::string> incomplete;

  bool complete() const noexcept { return incomplete.empty(); }
};

ClassificationRow classify(const LocalRule& rule, std::uint64_t rule_key, const ClassifyBounds& bounds,
                           const Budget& budget);

/// Statements the theory forbids (permutive or right-closing with an orphan or a diamond,
/// an orphan in a balanced level). Empty for a consistent row.
std::vector<std::string> consistency_violations(const ClassificationRow& row);

/// rule=... key=value line.
std::string to_record(const ClassificationRow& row);
std::string to_text(const ClassificationRow& row);
std::string text_header();

/// Rule key of a record line written by to_record, if it is one.
std::optional<std::uint64_t> record_rule_key(const std::string& line);

using RowSink = std::function<void(const ClassificationRow&)>;

namespace parallel {
/// Classifies rules [first, last) of the space across the workers; rows reach `sink` in
/// rule-key order, a batch at a time.
void scan_rules(const RuleSpace& space, std::uint64_t first, std::uint64_t last, const ClassifyBounds& bounds,
                const Budget& budget, const RowSink& sink);
}  // namespace parallel

namespace serial {
void scan_rules(const RuleSpace& space, std::uint64_t first, std::uint64_t last, const ClassifyBounds& bounds,
                const Budget& budget, const RowSink& sink);
}  // namespace serial

}  // namespace treeca
