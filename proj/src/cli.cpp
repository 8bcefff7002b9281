#include "treeca/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "treeca/analysis.hpp"
#include "treeca/classify.hpp"
#include "treeca/dynamics.hpp"
#include "treeca/error.hpp"
#include "treeca/kernels.hpp"

namespace treeca::cli {

namespace {

struct Globals {
  std::string rule_file;
  std::string builtin;
  int arity = 2;
  int alphabet = 2;
  int radius = 1;
  std::vector<std::uint64_t> positions;
  std::string format = "text";
  std::uint64_t budget = 0;
  int threads = 0;
};

class Session {
 public:
  Session(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

  bool records() const { return g_.format == "records"; }
  std::ostream& out() { return out_; }

  Budget budget() const {
    if (g_.budget > 0) return Budget{g_.budget};
    return Budget::from_env();
  }

  LocalRule rule() const {
    if (!g_.rule_file.empty() && !g_.builtin.empty()) throw InvalidInput("give either --rule or --builtin, not both");
    if (!g_.rule_file.empty()) return load_rule(g_.rule_file);
    if (!g_.builtin.empty()) return builtin_rule(g_.builtin, g_.arity, g_.alphabet, g_.radius, g_.positions);
    throw InvalidInput("a rule is required: --rule FILE or --builtin NAME");
  }

  Pattern pattern(const LocalRule& rule, const std::string& text) const {
    return parse_pattern(text, rule.geometry(), rule.alphabet_size());
  }

  Letter letter(const LocalRule& rule, int value, const char* what) const {
    if (value < 0 || value >= rule.alphabet_size())
      throw InvalidInput(std::string(what) + " must be a letter below " + std::to_string(rule.alphabet_size()));
    return static_cast<Letter>(value);
  }

  void verdict(const Verdict& v) {
    if (records())
      out_ << v.to_record() << "\n";
    else
      out_ << v.serialize();
  }

  /// One `key: value` line in text mode; `key=value` pairs on one line in record mode.
  void fields(const std::vector<std::pair<std::string, std::string>>& kv) {
    if (records()) {
      for (std::size_t i = 0; i < kv.size(); ++i) out_ << (i ? " " : "") << kv[i].first << "=" << kv[i].second;
      out_ << "\n";
    } else {
      for (const auto& [k, v] : kv) out_ << k << ": " << v << "\n";
    }
  }

 private:
  const Globals& g_;
  std::ostream& out_;
};

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

template <class T>
std::string joined(const std::vector<T>& xs, const std::function<std::string(const T&)>& f) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + f(xs[i]);
  return s;
}

std::string opt_pattern(const std::optional<Pattern>& p) { return p ? to_string(*p) : "none"; }

// ---------------------------------------------------------------------------

using Handler = std::function<void(Session&)>;

struct Registry {
  std::vector<std::pair<CLI::App*, Handler>> commands;
  void add(CLI::App* app, Handler h) { commands.emplace_back(app, std::move(h)); }
};

void add_dynamics(CLI::App& app, Registry& reg) {
  {
    auto* sub = app.add_subcommand("apply", "Apply the global map to a block (depth n to n - steps·r)");
    auto pattern = std::make_shared<std::string>();
    auto steps = std::make_shared<int>(1);
    sub->add_option("--pattern,-p", *pattern, "Level-order block")->required();
    sub->add_option("--steps", *steps, "Number of applications")->capture_default_str()->check(CLI::PositiveNumber);
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      const auto image = iterate(rule, s.pattern(rule, *pattern), *steps);
      if (s.records())
        s.out() << "image=" << to_string(image) << "\n";
      else
        s.out() << to_string(image) << "\n";
    });
  }
  {
    auto* sub = app.add_subcommand("orbit", "Print τ^i of a block for i = 0, 1, ... while defined");
    auto pattern = std::make_shared<std::string>();
    auto steps = std::make_shared<int>(-1);
    sub->add_option("--pattern,-p", *pattern, "Level-order block")->required();
    sub->add_option("--steps", *steps, "Stop after this many applications (default: until depth <= r)");
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      auto cur = s.pattern(rule, *pattern);
      for (int t = 0;; ++t) {
        if (s.records())
          s.out() << "t=" << t << " pattern=" << to_string(cur) << "\n";
        else
          s.out() << t << " " << to_string(cur) << "\n";
        if (cur.depth() <= rule.radius() || (*steps >= 0 && t >= *steps)) break;
        cur = apply(rule, cur);
      }
    });
  }
  {
    auto* sub = app.add_subcommand("trajectory", "Count P(τ,n,t) and its entropy estimates, or list one trajectory");
    auto n = std::make_shared<int>(1);
    auto t = std::make_shared<int>(4);
    auto base = std::make_shared<std::string>();
    sub->add_option("--n", *n, "Observation depth")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--t", *t, "Number of steps")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--base", *base, "Print the trajectory of this base block instead");
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      if (!base->empty()) {
        const auto tuple = trajectory(rule, s.pattern(rule, *base), *n, *t);
        for (std::size_t i = 0; i < tuple.entries.size(); ++i) {
          if (s.records())
            s.out() << "t=" << i << " observed=" << to_string(tuple.entries[i]) << "\n";
          else
            s.out() << i << " " << to_string(tuple.entries[i]) << "\n";
        }
        return;
      }
      const auto stats = trajectory_set(rule, *n, *t, s.budget());
      s.fields({{"n", std::to_string(stats.observation_depth)},
                {"t", std::to_string(stats.steps)},
                {"distinct", std::to_string(stats.distinct_count)},
                {"counts", joined<std::uint64_t>(stats.counts, [](const auto& c) { return std::to_string(c); })},
                {"entropy", joined<double>(stats.entropy_estimates, [](const auto& e) { return fixed(e); })}});
    });
  }
}

void add_surjectivity(CLI::App& app, Registry& reg) {
  {
    auto* sub = app.add_subcommand("check-permutive", "Decide permutivity in the root letter");
    reg.add(sub, [](Session& s) { s.verdict(is_permutive(s.rule()).with("property", "permutive")); });
  }
  {
    auto* sub = app.add_subcommand("find-orphan", "Search for a block without preimage");
    auto depth = std::make_shared<int>(3);
    sub->add_option("--max-depth,--depth", *depth, "Largest block depth")->capture_default_str()->check(
        CLI::PositiveNumber);
    reg.add(sub, [=](Session& s) { s.verdict(orphan_search(s.rule(), *depth, s.budget()).verdict); });
  }
  {
    auto* sub = app.add_subcommand("balance", "Preimage counts of all blocks at one level");
    auto level = std::make_shared<int>(1);
    auto all = std::make_shared<bool>(false);
    sub->add_option("--level,--n", *level, "Block depth")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_flag("--counts", *all, "Also list every block's count");
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      const auto rep = balance_report(rule, *level, s.budget());
      s.fields({{"level", std::to_string(rep.level)},
                {"expected", std::to_string(rep.expected)},
                {"min", std::to_string(rep.min_count)},
                {"min_block", to_string(rep.min_block)},
                {"max", std::to_string(rep.max_count)},
                {"max_block", to_string(rep.max_block)},
                {"over_witness", opt_pattern(rep.over_witness)},
                {"orphan", opt_pattern(rep.orphan)},
                {"balanced", rep.balanced() ? "true" : "false"}});
      if (*all)
        for (std::uint64_t q = 0; q < rep.counts.size(); ++q) {
          const auto block = to_string(pattern_from_key(rule.geometry(), rule.alphabet_size(), rep.level, q));
          if (s.records())
            s.out() << "block=" << block << " count=" << rep.counts[q] << "\n";
          else
            s.out() << block << " " << rep.counts[q] << "\n";
        }
    });
  }
}

void add_preinjectivity(CLI::App& app, Registry& reg) {
  {
    auto* sub = app.add_subcommand("find-diamond", "Search for a diamond (two blocks with a common boundary and image)");
    auto size = std::make_shared<int>(5);
    auto relaxed = std::make_shared<bool>(false);
    auto method = std::make_shared<std::string>("search");
    auto block = std::make_shared<std::string>();
    auto layers = std::make_shared<int>(2);
    sub->add_option("--size,--n", *size, "Block depth")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_flag("--relaxed", *relaxed, "Allow sizes from 2r instead of 2r+3");
    sub->add_option("--method", *method, "search: exhaustive; myhill: tile preimages of an over-mean block")
        ->capture_default_str()
        ->check(CLI::IsMember({"search", "myhill"}));
    sub->add_option("--block,-q", *block, "Over-mean block for --method myhill (default: balance over-witness)");
    sub->add_option("--layers", *layers, "Largest number of free tile layers for --method myhill")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      if (*method == "search") {
        s.verdict(diamond_search(rule, *size, *relaxed ? DiamondMode::relaxed : DiamondMode::strict, s.budget())
                      .verdict);
        return;
      }
      std::optional<Pattern> q;
      if (!block->empty()) {
        q = s.pattern(rule, *block);
      } else {
        q = balance_report(rule, 1, s.budget()).over_witness;
        if (!q) throw InvalidInput("no over-mean block at level 1; pass --block");
      }
      s.verdict(myhill_collision_search(rule, *q, *layers, s.budget()).verdict);
    });
  }
  {
    auto* sub = app.add_subcommand("verify-diamond", "Replay the diamond definition on a given triple");
    auto boundary = std::make_shared<std::string>();
    auto first = std::make_shared<std::string>();
    auto second = std::make_shared<std::string>();
    auto relaxed = std::make_shared<bool>(false);
    sub->add_option("--boundary", *boundary, "Common boundary block (depth r)")->required();
    sub->add_option("--first", *first, "First block")->required();
    sub->add_option("--second", *second, "Second block")->required();
    sub->add_flag("--relaxed", *relaxed, "Allow sizes from 2r instead of 2r+3");
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      const Diamond d{s.pattern(rule, *boundary), s.pattern(rule, *first), s.pattern(rule, *second)};
      std::string why;
      const bool ok = verify_diamond(rule, d, *relaxed ? DiamondMode::relaxed : DiamondMode::strict, &why);
      if (ok)
        s.fields({{"diamond", "valid"}, {"size", std::to_string(d.size())}});
      else
        s.fields({{"diamond", "invalid"}, {"reason", s.records() ? "\"" + why + "\"" : why}});
    });
  }
}

void add_closing(CLI::App& app, Registry& reg) {
  {
    auto* sub = app.add_subcommand("check-right-closing", "Right-closingness at one window or the least certifying one");
    auto window = std::make_shared<int>(0);
    auto max_window = std::make_shared<int>(3);
    sub->add_option("--N", *window, "Check exactly this window");
    sub->add_option("--max-N", *max_window, "Search windows 1..max-N for the least certifying one")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      if (*window > 0) {
        s.verdict(right_closing_at(rule, *window, s.budget()).verdict);
        return;
      }
      s.verdict(right_closing_min_window(rule, *max_window, s.budget()).verdict);
    });
  }
  {
    auto* sub = app.add_subcommand("check-extension-property", "Unique child extension at window N (radius 1)");
    auto window = std::make_shared<int>(1);
    sub->add_option("--N", *window, "Window depth")->capture_default_str()->check(CLI::PositiveNumber);
    reg.add(sub, [=](Session& s) { s.verdict(extension_property_check(s.rule(), *window, s.budget()).verdict); });
  }
  {
    auto* sub = app.add_subcommand("build-preimage", "Construct a preimage of a target block");
    auto mode = std::make_shared<std::string>("permutive");
    auto target = std::make_shared<std::string>();
    auto filler = std::make_shared<std::string>();
    auto root = std::make_shared<int>(-1);
    auto window = std::make_shared<int>(1);
    sub->add_option("--mode", *mode, "permutive: backward filling; closing: extension-property recursion")
        ->capture_default_str()
        ->check(CLI::IsMember({"permutive", "closing"}));
    sub->add_option("--target,-p", *target, "Target block")->required();
    sub->add_option("--filler", *filler, "permutive: letters for levels n..n+r-1 (default all 0)");
    sub->add_option("--root", *root, "closing: root letter of the preimage (default target root)");
    sub->add_option("--N", *window, "closing: extension window")->capture_default_str()->check(CLI::PositiveNumber);
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      const auto t = s.pattern(rule, *target);
      std::optional<Pattern> g;
      if (*mode == "permutive") {
        const auto& geo = rule.geometry();
        const auto cells = geo.delta_size(t.depth() + rule.radius()) - geo.delta_size(t.depth());
        const auto fill = filler->empty() ? std::vector<Letter>(cells, 0) : parse_letters(*filler, rule.alphabet_size());
        g = permutive_preimage_build(rule, t, fill);
      } else {
        const Letter a = *root < 0 ? t[0] : s.letter(rule, *root, "--root");
        g = closing_preimage_build(rule, a, t, *window, s.budget());
      }
      s.fields({{"preimage", to_string(*g)}, {"image", to_string(apply(rule, *g))}});
    });
  }
  {
    auto* sub = app.add_subcommand("openness-evidence", "Look for an image cylinder not covered from one root letter");
    auto root = std::make_shared<int>(0);
    auto m = std::make_shared<int>(1);
    auto m_prime = std::make_shared<int>(2);
    sub->add_option("--root,-a", *root, "Root letter")->capture_default_str();
    sub->add_option("--m", *m, "Depth of q")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--m-prime", *m_prime, "Depth of the extension q'")->capture_default_str()->check(
        CLI::PositiveNumber);
    reg.add(sub, [=](Session& s) {
      const auto rule = s.rule();
      s.verdict(non_openness_evidence(rule, s.letter(rule, *root, "--root"), *m, *m_prime, s.budget()).verdict);
    });
  }
}

void add_expansivity(CLI::App& app, Registry& reg) {
  auto* sub = app.add_subcommand("falsify-expansivity", "Two bases with identical Δ_N trajectories for T steps");
  auto window = std::make_shared<int>(1);
  auto horizon = std::make_shared<int>(2);
  sub->add_option("--N", *window, "Observation depth")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--T", *horizon, "Horizon")->capture_default_str()->check(CLI::NonNegativeNumber);
  reg.add(sub, [=](Session& s) {
    const auto rule = s.rule();
    try {
      const auto w = expansivity_witness(rule, *window, *horizon, s.budget());
      const bool ok = verify_expansivity_witness(rule, w);
      s.verdict(Verdict::refuted(*horizon, {to_string(w.first), to_string(w.second)})
                    .with("property", "positively-expansive")
                    .with("N", std::to_string(*window))
                    .with("replayed", ok ? "true" : "false"));
    } catch (const NoWitness&) {
      s.verdict(Verdict::evidence(*horizon).with("property", "positively-expansive").with("N",
                                                                                             std::to_string(*window)));
    }
  });
}

// Keeps the complete record lines of a previous run of the same scan and returns the
// key to resume from. A trailing line without newline is an interrupted write and dropped.
std::uint64_t resume_point(const std::string& path, std::uint64_t first, std::vector<std::string>& kept) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return first;
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::uint64_t next = first;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    const auto key = record_rule_key(line);
    if (!key) throw InvalidInput(path + ": not a scan record: '" + line + "'");
    if (*key != next)
      throw InvalidInput(path + ": expected rule " + std::to_string(next) + ", found rule " + std::to_string(*key));
    kept.push_back(line);
    ++next;
  }
  return next;
}

void add_scan(CLI::App& app, Registry& reg, const Globals& globals) {
  auto* sub = app.add_subcommand("scan", "Classify every rule of (arity, alphabet, radius) in rule-key order");
  auto output = std::make_shared<std::string>();
  auto serial_ref = std::make_shared<bool>(false);
  auto bounds = std::make_shared<ClassifyBounds>();
  auto first = std::make_shared<std::uint64_t>(0);
  auto count = std::make_shared<std::uint64_t>(0);
  sub->add_option("--output,-o", *output,
                  "Record file, written row by row; an existing file is resumed after its last complete row");
  sub->add_flag("--serial", *serial_ref, "Use the single-threaded reference scanner");
  sub->add_option("--from", *first, "First rule key")->capture_default_str();
  sub->add_option("--count", *count, "Number of rules (default: to the end)");
  sub->add_option("--orphan-depth", bounds->orphan_depth)->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--balance-levels", bounds->balance_levels)->capture_default_str()->check(CLI::NonNegativeNumber);
  sub->add_option("--diamond-size", bounds->diamond_size)->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--right-closing-max", bounds->right_closing_max)->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--extension-max", bounds->extension_max)->capture_default_str()->check(CLI::NonNegativeNumber);
  reg.add(sub, [=, &globals](Session& s) {
    const auto budget = s.budget();
    const auto space = enumerate_rules(globals.arity, globals.alphabet, globals.radius, budget);
    if (*first > space.size()) throw InvalidInput("--from is past the last rule");
    const auto last = *count == 0 ? space.size() : std::min(space.size(), *first + *count);
    const auto scan = *serial_ref ? serial::scan_rules : parallel::scan_rules;

    if (output->empty()) {
      if (!s.records()) s.out() << text_header() << "\n";
      scan(space, *first, last, *bounds, budget, [&](const ClassificationRow& row) {
        s.out() << (s.records() ? to_record(row) : to_text(row)) << "\n";
      });
      return;
    }

    std::vector<std::string> kept;
    const auto start = resume_point(*output, *first, kept);
    std::ofstream file(*output, std::ios::binary | std::ios::trunc);
    if (!file) throw InvalidInput("cannot write " + *output);
    for (const auto& line : kept) file << line << "\n";
    file.flush();
    std::uint64_t written = 0;
    scan(space, std::min(start, last), last, *bounds, budget, [&](const ClassificationRow& row) {
      file << to_record(row) << "\n";
      file.flush();
      ++written;
    });
    s.fields({{"rules", std::to_string(last - *first)},
              {"resumed", std::to_string(kept.size())},
              {"written", std::to_string(written)},
              {"output", *output}});
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"treeca: cellular automata on the full k-ary tree"};
  app.name("treeca");
  app.fallthrough();
  app.require_subcommand(1);

  Globals globals;
  app.add_option("--rule,-r", globals.rule_file, "Rule file (treeca-rule v1)");
  app.add_option("--builtin,-b", globals.builtin,
                 "Built-in rule: or-all, xor-children, xor-all, identity, first-child, sum-mod");
  app.add_option("--arity,-k", globals.arity, "Tree arity k")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--alphabet,-A", globals.alphabet, "Alphabet size")->capture_default_str()->check(
      CLI::Range(1, 256));
  app.add_option("--radius", globals.radius, "Rule radius")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--positions", globals.positions, "Neighborhood positions summed by sum-mod")->delimiter(',');
  app.add_option("--format", globals.format, "text or records")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "records"}));
  app.add_option("--budget", globals.budget, "Work budget (default: TREECA_BUDGET or 2^32)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads,-j", globals.threads, "Worker threads (default: OpenMP default)")->check(
      CLI::NonNegativeNumber);

  Registry reg;
  add_dynamics(app, reg);
  add_surjectivity(app, reg);
  add_preinjectivity(app, reg);
  add_closing(app, reg);
  add_expansivity(app, reg);
  add_scan(app, reg, globals);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    set_worker_threads(globals.threads);
    Session session(globals, out);
    for (auto& [cmd, handler] : reg.commands)
      if (cmd->parsed()) handler(session);
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace treeca::cli
