#include "treeca/classify.hpp"

#include <exception>
#include <sstream>

#include "treeca/error.hpp"
#include "treeca/kernels.hpp"

namespace treeca {

namespace {

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

constexpr std::uint64_t kBatch = 64;

}  // namespace

ClassificationRow classify(const LocalRule& rule, std::uint64_t rule_key, const ClassifyBounds& bounds,
                           const Budget& budget) {
  ClassificationRow row;
  row.rule_key = rule_key;
  row.table = letters_to_string(rule.table(), rule.alphabet_size());
  row.permutive = is_permutive(rule).status == Status::certified;

  auto attempt = [&](const char* component, auto&& body) {
    try {
      body();
    } catch (const BudgetExceeded&) {
      row.incomplete.emplace_back(component);
    }
  };

  attempt("orphan", [&] {
    const auto res = orphan_search(rule, bounds.orphan_depth, budget);
    if (res.orphan) row.orphan_depth = res.orphan->depth();
  });
  attempt("balance", [&] {
    for (int n = 1; n <= bounds.balance_levels; ++n) {
      if (!balance_report(rule, n, budget).balanced()) break;
      row.balanced_up_to = n;
    }
  });
  attempt("diamond", [&] {
    if (diamond_search(rule, bounds.diamond_size, bounds.diamond_mode, budget).diamond)
      row.diamond_size = bounds.diamond_size;
  });
  attempt("right-closing", [&] {
    row.right_closing_N = right_closing_min_window(rule, bounds.right_closing_max, budget).minimal_window;
  });
  if (rule.radius() == 1 && bounds.extension_max >= 1) {
    attempt("extension", [&] {
      for (int n = 1; n <= bounds.extension_max && !row.extension_property_N; ++n)
        if (extension_property_check(rule, n, budget).verdict.status == Status::certified)
          row.extension_property_N = n;
    });
  }
  return row;
}

std::vector<std::string> consistency_violations(const ClassificationRow& row) {
  std::vector<std::string> out;
  if (row.permutive && row.orphan_depth) out.emplace_back("permutive rule with an orphan");
  if (row.permutive && row.diamond_size) out.emplace_back("permutive rule with a diamond");
  if (row.right_closing_N && row.orphan_depth) out.emplace_back("right-closing rule with an orphan");
  if (row.right_closing_N && row.diamond_size) out.emplace_back("right-closing rule with a diamond");
  if (row.orphan_depth && row.balanced_up_to >= *row.orphan_depth) out.emplace_back("orphan in a balanced level");
  return out;
}

std::string to_record(const ClassificationRow& row) {
  std::ostringstream os;
  os << "rule=" << row.rule_key << " table=" << row.table << " permutive=" << (row.permutive ? "true" : "false")
     << " orphan_depth=" << opt(row.orphan_depth) << " balanced_up_to=" << row.balanced_up_to
     << " diamond_size=" << opt(row.diamond_size) << " right_closing_N=" << opt(row.right_closing_N)
     << " extension_property_N=" << opt(row.extension_property_N) << " complete=" << (row.complete() ? "true" : "false");
  if (!row.complete()) {
    os << " incomplete=";
    for (std::size_t i = 0; i < row.incomplete.size(); ++i) os << (i ? "," : "") << row.incomplete[i];
  }
  return os.str();
}

namespace {

// Column widths of the text table; wider values push the rest of the line right.
constexpr int kWidths[] = {6, 14, 11, 8, 10, 9, 15, 11};

std::string columns(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += cells[i];
    if (i + 1 == cells.size()) break;
    const auto width = static_cast<std::size_t>(kWidths[i]);
    out.append(cells[i].size() + 1 < width ? width - cells[i].size() : 1, ' ');
  }
  return out;
}

}  // namespace

std::string text_header() {
  return columns({"rule", "table", "permutive", "orphan", "balanced", "diamond", "right-closing", "extension",
                  "complete"});
}

std::string to_text(const ClassificationRow& row) {
  return columns({std::to_string(row.rule_key), row.table, row.permutive ? "yes" : "no", opt(row.orphan_depth),
                  std::to_string(row.balanced_up_to), opt(row.diamond_size), opt(row.right_closing_N),
                  opt(row.extension_property_N), row.complete() ? "yes" : "no"});
}

std::optional<std::uint64_t> record_rule_key(const std::string& line) {
  if (line.rfind("rule=", 0) != 0) return std::nullopt;
  const auto end = line.find(' ');
  try {
    std::size_t used = 0;
    const auto text = line.substr(5, end == std::string::npos ? std::string::npos : end - 5);
    const auto key = std::stoull(text, &used);
    if (used != text.size()) return std::nullopt;
    return key;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

namespace parallel {

void scan_rules(const RuleSpace& space, std::uint64_t first, std::uint64_t last, const ClassifyBounds& bounds,
                const Budget& budget, const RowSink& sink) {
  std::vector<ClassificationRow> rows;
  std::vector<std::exception_ptr> errors;
  for (std::uint64_t start = first; start < last; start += kBatch) {
    const auto len = std::min(kBatch, last - start);
    rows.assign(len, {});
    errors.assign(len, nullptr);
    // Inner kernels see an inactive nested region and run on one thread.
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(len); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      try {
        rows[idx] = classify(space.at(start + idx), start + idx, bounds, budget);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
    for (std::uint64_t i = 0; i < len; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      sink(rows[i]);
    }
  }
}

}  // namespace parallel

namespace serial {

void scan_rules(const RuleSpace& space, std::uint64_t first, std::uint64_t last, const ClassifyBounds& bounds,
                const Budget& budget, const RowSink& sink) {
  for (std::uint64_t i = first; i < last; ++i) sink(classify(space.at(i), i, bounds, budget));
}

}  // namespace serial

}  // namespace treeca
