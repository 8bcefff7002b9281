// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Time limits are pinned below; counts and witnesses must match exactly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "treeca/analysis.hpp"
#include "treeca/classify.hpp"
#include "treeca/cli.hpp"
#include "treeca/dynamics.hpp"
#include "treeca/kernels.hpp"

using namespace treeca;

namespace {

constexpr double kXorLimitS = 5.0;
constexpr double kOrLimitS = 1.0;
constexpr double kScanLimitS = 600.0;
constexpr double kExpansivityPerRuleLimitS = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) note = what;
    pass = false;
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o.pass = false;
    o.note = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%.3f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
              o.note.empty() ? "" : ": ", o.note.c_str());
  std::fflush(stdout);
}

std::string run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = cli::run(args, out, err);
  if (code) *code = c;
  return out.str();
}

std::string field(const std::string& text, const std::string& key) {
  const auto at = text.find(key + "=");
  if (at == std::string::npos) return {};
  const auto start = at + key.size() + 1;
  return text.substr(start, text.find_first_of(" \n", start) - start);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);) out.push_back(part);
  return out;
}

const std::vector<ClassificationRow>& full_scan(double* elapsed = nullptr) {
  static std::vector<ClassificationRow> rows;
  static double took = 0;
  if (rows.empty()) {
    const auto t0 = Clock::now();
    parallel::scan_rules(RuleSpace(2, 2, 1), 0, 256, ClassifyBounds{}, Budget{},
                         [&](const ClassificationRow& r) { rows.push_back(r); });
    took = seconds_since(t0);
  }
  if (elapsed) *elapsed = took;
  return rows;
}

}  // namespace

int main() {
  report(1, "xor-children is surjective up to depth 3 but has a size-5 diamond", [] {
    Outcome o;
    const auto t0 = Clock::now();
    const auto orphan = run_cli({"--format", "records", "find-orphan", "--builtin", "xor-children", "--max-depth", "3"});
    o.require(field(orphan, "verdict") == "bounded-evidence", "find-orphan: " + orphan);
    const auto diamond = run_cli({"--format", "records", "find-diamond", "--builtin", "xor-children", "--size", "5"});
    const auto parts = split(field(diamond, "witness"), ',');
    o.require(field(diamond, "verdict") == "refuted" && parts.size() == 3, "find-diamond: " + diamond);
    if (parts.size() == 3) {
      o.require(parts[0] == "0", "boundary " + parts[0]);
      o.require(parts[1] == std::string(31, '0'), "first block " + parts[1]);
      o.require(parts[2].substr(0, 7) == "0110000" && parts[2].substr(7) == std::string(24, '0'),
                "second block " + parts[2]);
      const auto verified = run_cli({"verify-diamond", "--builtin", "xor-children", "--boundary", parts[0], "--first",
                                 parts[1], "--second", parts[2]});
      o.require(verified.rfind("diamond: valid", 0) == 0, "re-verification: " + verified);
    }
    o.require(seconds_since(t0) < kXorLimitS, "slower than 5 s");
    return o;
  });

  report(2, "or-all has a depth-3 orphan and level-1 counts {1, 7} around the mean 4", [] {
    Outcome o;
    const auto t0 = Clock::now();
    const auto orphan = run_cli({"--format", "records", "find-orphan", "--builtin", "or-all", "--max-depth", "3"});
    o.require(field(orphan, "verdict") == "refuted" && field(orphan, "bound") == "3", "find-orphan: " + orphan);
    o.require(field(orphan, "witness").size() == 7, "orphan is not a depth-3 block");
    const auto bal = run_cli({"--format", "records", "balance", "--builtin", "or-all", "--level", "1"});
    o.require(field(bal, "expected") == "4", "expected " + field(bal, "expected"));
    o.require(field(bal, "min") == "1" && field(bal, "max") == "7", "counts " + bal);
    o.require(field(bal, "over_witness") == "1", "over-witness " + field(bal, "over_witness"));
    const auto rep = balance_report(builtin_rule("or-all", 2, 2, 1), 1, Budget{});
    o.require(rep.counts == std::vector<std::uint64_t>{1, 7}, "per-block counts differ from {1, 7}");
    o.require(seconds_since(t0) < kOrLimitS, "slower than 1 s");
    return o;
  });

  report(3, "no permutive elementary rule has an orphan (depth <= 3) or a diamond (size 5)", [] {
    Outcome o;
    double took = 0;
    const auto& rows = full_scan(&took);
    o.require(rows.size() == 256, "scan did not produce 256 rows");
    int permutive = 0;
    for (const auto& r : rows) {
      o.require(r.complete(), "rule " + std::to_string(r.rule_key) + " incomplete");
      if (!r.permutive) continue;
      ++permutive;
      o.require(!r.orphan_depth && !r.diamond_size, "violation at rule " + std::to_string(r.rule_key));
    }
    o.require(permutive == 16, "expected 16 permutive rules, saw " + std::to_string(permutive));
    o.require(took < kScanLimitS, "scan slower than 10 min");
    if (o.pass) o.note = std::to_string(permutive) + " permutive rules, 0 violations";
    return o;
  });

  report(4, "right-closing rules (N <= 3) have no diamond or orphan; identity certifies at N = 2", [] {
    Outcome o;
    int closing = 0;
    for (const auto& r : full_scan()) {
      if (!r.right_closing_N) continue;
      ++closing;
      o.require(!r.orphan_depth && !r.diamond_size, "violation at rule " + std::to_string(r.rule_key));
    }
    const auto id = right_closing_min_window(builtin_rule("identity", 2, 2, 1), 3, Budget{});
    o.require(id.minimal_window == 2, "identity does not certify at exactly N = 2");
    o.require(full_scan()[15].right_closing_N == 2, "scan row for identity differs");
    if (o.pass) o.note = std::to_string(closing) + " right-closing rules, 0 violations";
    return o;
  });

  report(5, "falsify-expansivity N=1 T=2 succeeds and re-verifies for all 256 rules", [] {
    Outcome o;
    const RuleSpace space(2, 2, 1);
    double slowest = 0;
    for (std::uint64_t i = 0; i < space.size(); ++i) {
      const auto t0 = Clock::now();
      const auto rule = space.at(i);
      const auto w = expansivity_witness(rule, 1, 2, Budget{});
      slowest = std::max(slowest, seconds_since(t0));
      o.require(verify_expansivity_witness(rule, w), "rule " + std::to_string(i) + " witness does not replay");
    }
    const auto xc = run_cli({"--format", "records", "falsify-expansivity", "--builtin", "xor-children", "--N", "1", "--T",
                         "2"});
    const auto pair = split(field(xc, "witness"), ',');
    o.require(pair.size() == 2 && std::make_pair(pair[0], pair[1]) <= std::make_pair(std::string("0000000"),
                                                                                         std::string("0000011")),
              "xor-children pair " + field(xc, "witness"));
    o.require(field(xc, "replayed") == "true", "xor-children pair does not replay");
    o.require(slowest < kExpansivityPerRuleLimitS, "a rule took more than 1 s");
    return o;
  });

  report(6, "preimage counts sum to 2^|Delta_(n+1)| and |P(tau,n,t)| <= 2^(|Delta_n| t) for all rules", [] {
    Outcome o;
    const RuleSpace space(2, 2, 1);
    const TreeGeometry g(2);
    int checks = 0;
    for (std::uint64_t i = 0; i < space.size(); ++i) {
      const auto rule = space.at(i);
      for (int n = 1; n <= 2; ++n) {
        std::uint64_t sum = 0;
        for (auto c : parallel::image_histogram(rule, n, Budget{})) sum += c;
        o.require(sum == (std::uint64_t{1} << g.delta_size(n + 1)), "partition fails at rule " + std::to_string(i));
        const auto stats = trajectory_set(rule, n, 4, Budget{});
        for (int t = 1; t <= 4; ++t) {
          o.require(stats.counts[t - 1] <= saturating_pow(2, g.delta_size(n) * static_cast<std::uint64_t>(t)),
                    "trajectory bound fails at rule " + std::to_string(i));
          ++checks;
        }
      }
    }
    if (o.pass) o.note = std::to_string(checks) + " trajectory bounds, 512 partitions, 0 violations";
    return o;
  });

  report(7, "constructive preimages: 100 permutive builds and identity closing builds reproduce targets", [] {
    Outcome o;
    std::vector<LocalRule> permutive;
    for (const auto& rule : RuleSpace(2, 2, 1))
      if (is_permutive(rule).status == Status::certified) permutive.push_back(rule);
    permutive.push_back(builtin_rule("sum-mod", 2, 3, 1, {0, 2}));
    permutive.push_back(builtin_rule("xor-all", 3, 2, 1));
    permutive.push_back(builtin_rule("sum-mod", 2, 2, 2, {0, 1, 5}));
    std::mt19937_64 rng(2024);
    int built = 0;
    for (int i = 0; i < 100; ++i) {
      const auto& rule = permutive[rng() % permutive.size()];
      const auto& g = rule.geometry();
      const auto A = static_cast<unsigned>(rule.alphabet_size());
      std::vector<Letter> t(g.delta_size(4)), f(g.delta_size(4 + rule.radius()) - g.delta_size(4));
      for (auto& x : t) x = static_cast<Letter>(rng() % A);
      for (auto& x : f) x = static_cast<Letter>(rng() % A);
      const Pattern target(g, rule.alphabet_size(), 4, t);
      const auto pre = permutive_preimage_build(rule, target, f);
      o.require(apply(rule, pre) == target, "permutive build " + std::to_string(i) + " misses its target");
      built += apply(rule, pre) == target;
    }
    const auto id = builtin_rule("identity", 2, 2, 1);
    for (int i = 0; i < 20; ++i) {
      std::vector<Letter> t(31);
      for (auto& x : t) x = static_cast<Letter>(rng() % 2);
      const Pattern target(id.geometry(), 2, 5, t);
      for (int N = 1; N <= 2; ++N) {
        const auto pre = closing_preimage_build(id, target[0], target, N, Budget{});
        o.require(pre == restrict(target, pre.depth()), "identity closing build is not the truncation");
      }
    }
    if (o.pass) o.note = std::to_string(built) + "/100 permutive, 40/40 closing";
    return o;
  });

  report(8, "k = 1 shift: balanced, orphan-free to depth 5, diamond-free, right-closing at N <= 2", [] {
    Outcome o;
    const auto shift = builtin_rule("first-child", 1, 2, 1);
    for (int n = 1; n <= 5; ++n) o.require(balance_report(shift, n, Budget{}).balanced(), "unbalanced level");
    o.require(orphan_search(shift, 5, Budget{}).verdict.status == Status::bounded_evidence, "orphan found");
    for (int size = 5; size <= 8; ++size)
      o.require(diamond_search(shift, size, DiamondMode::strict, Budget{}).verdict.status == Status::bounded_evidence,
                "diamond at size " + std::to_string(size));
    const auto rc = right_closing_min_window(shift, 2, Budget{});
    o.require(rc.verdict.status == Status::certified && rc.minimal_window && *rc.minimal_window <= 2,
              "not right-closing at N <= 2");
    if (o.pass) o.note = "right-closing at N = " + std::to_string(*rc.minimal_window);
    return o;
  });

  report(9, "identity: |P(tau,1,t)| = 2 and log|P|/t decreases toward 0 up to t = 10", [] {
    Outcome o;
    const auto stats = trajectory_set(builtin_rule("identity", 2, 2, 1), 1, 10, Budget{});
    for (int t = 1; t <= 10; ++t) {
      o.require(stats.counts[t - 1] == 2, "count at t=" + std::to_string(t));
      o.require(std::abs(stats.entropy_estimates[t - 1] - std::log(2.0) / t) < 1e-12, "estimate at t=" + std::to_string(t));
      if (t > 1) o.require(stats.entropy_estimates[t - 1] < stats.entropy_estimates[t - 2], "not decreasing");
    }
    if (o.pass) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "estimate at t=10 is %.6f", stats.entropy_estimates[9]);
      o.note = buf;
    }
    return o;
  });

  return failures == 0 ? 0 : 1;
}
