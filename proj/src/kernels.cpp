#include "treeca/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <string>

#include "treeca/dynamics.hpp"
#include "treeca/error.hpp"

namespace treeca {

namespace {
std::atomic<int> g_threads{0};

struct HistogramShape {
  std::uint64_t domain_cells;
  std::uint64_t image_cells;
  std::uint64_t domain_count;
  std::uint64_t image_count;
};

HistogramShape histogram_shape(const LocalRule& rule, int level, const Budget& budget) {
  if (level < 1) throw InvalidInput("level must be at least 1");
  const auto& g = rule.geometry();
  HistogramShape s{};
  s.domain_cells = g.delta_size(level + rule.radius());
  s.image_cells = g.delta_size(level);
  const auto a = static_cast<std::uint64_t>(rule.alphabet_size());
  s.domain_count = saturating_pow(a, s.domain_cells);
  s.image_count = saturating_pow(a, s.image_cells);
  budget.require(s.domain_count, "enumerating blocks of depth " + std::to_string(level + rule.radius()));
  return s;
}
}  // namespace

int worker_threads() noexcept {
  const int n = g_threads.load();
  return n > 0 ? n : omp_get_max_threads();
}

void set_worker_threads(int n) noexcept { g_threads.store(n > 0 ? n : 0); }

namespace parallel {

std::vector<std::uint64_t> image_histogram(const LocalRule& rule, int level, const Budget& budget) {
  const auto s = histogram_shape(rule, level, budget);
  const RuleEvaluator eval(rule);
  const int alphabet = rule.alphabet_size();
  std::vector<std::uint64_t> counts(s.image_count, 0);

#pragma omp parallel num_threads(worker_threads())
  {
    std::vector<std::uint64_t> local(s.image_count, 0);
    std::vector<Letter> cells(s.domain_cells), image(s.image_cells);
    // Each chunk decodes its first block once and steps through the rest like an odometer.
    constexpr std::uint64_t kChunk = 4096;
    const auto chunks = static_cast<std::int64_t>((s.domain_count + kChunk - 1) / kChunk);
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const auto start = static_cast<std::uint64_t>(c) * kChunk;
      const auto len = std::min(kChunk, s.domain_count - start);
      letters_from_key(start, alphabet, cells);
      for (std::uint64_t j = 0; j < len; ++j) {
        eval.apply_into(cells, image);
        ++local[letters_key(image, alphabet)];
        next_letters(cells, alphabet);
      }
    }
#pragma omp critical
    for (std::uint64_t q = 0; q < s.image_count; ++q) counts[q] += local[q];
  }
  return counts;
}

namespace {

// Elements of S(profile) = {(τ^i(f)|Δ_{d_i})_i : f}, each flattened into one string of
// letters, time-major, level order within a time.
struct ElementSet {
  std::vector<int> profile;
  std::vector<std::uint64_t> offsets;  // start of time i inside an element
  std::uint64_t width = 0;
  std::vector<std::string> elements;
};

ElementSet trajectory_elements(const LocalRule& rule, std::vector<int> profile, const Budget& budget) {
  const auto& g = rule.geometry();
  const int k = g.arity();
  const int r = rule.radius();
  const auto alphabet = static_cast<std::uint64_t>(rule.alphabet_size());

  ElementSet out;
  out.profile = profile;
  for (int d : profile) {
    out.offsets.push_back(out.width);
    out.width += d > 0 ? g.delta_size(d) : 0;
  }

  int last = -1;
  for (int i = 0; i < static_cast<int>(profile.size()); ++i)
    if (profile[i] >= 1) last = i;
  if (last < 0) {
    out.elements.emplace_back();
    return out;
  }

  // Children must expose Δ_{d_i - 1} for the output and Δ_r for the next root letter.
  std::vector<int> child_profile(static_cast<std::size_t>(last) + 1);
  for (int i = 0; i <= last; ++i)
    child_profile[i] = std::max({profile[i] - 1, i < last ? r : 0, 0});
  const ElementSet children = trajectory_elements(rule, child_profile, budget);

  const auto nchild = static_cast<std::uint64_t>(children.elements.size());
  const auto combos = saturating_mul(alphabet, saturating_pow(nchild, static_cast<std::uint64_t>(k)));
  budget.require(combos, "trajectory recursion");

  std::vector<std::uint64_t> level_start, level_width;
  for (int l = 0; l <= std::max(r, *std::max_element(profile.begin(), profile.end())); ++l) {
    level_start.push_back(g.delta_size(l));
    level_width.push_back(g.level_size(l));
  }

  std::vector<std::string> merged;
#pragma omp parallel num_threads(worker_threads())
  {
    std::vector<std::string> local;
    std::vector<const std::string*> kids(static_cast<std::size_t>(k));
    std::vector<Letter> column(static_cast<std::size_t>(last) + 1);
    std::string elem(out.width, '\0');
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(combos); ++c) {
      auto idx = static_cast<std::uint64_t>(c);
      column[0] = static_cast<Letter>(idx % alphabet);
      idx /= alphabet;
      for (int s = 0; s < k; ++s) {
        kids[s] = &children.elements[idx % nchild];
        idx /= nchild;
      }
      for (int i = 0; i < last; ++i) {
        std::uint64_t key = column[i];
        for (int l = 1; l <= r; ++l)
          for (int s = 0; s < k; ++s) {
            const auto from = children.offsets[i] + level_start[l - 1];
            for (std::uint64_t w = 0; w < level_width[l - 1]; ++w)
              key = key * alphabet + static_cast<Letter>((*kids[s])[from + w]);
          }
        column[i + 1] = rule.lookup_key(key);
      }
      for (int i = 0; i <= last; ++i) {
        if (profile[i] < 1) continue;
        auto pos = out.offsets[i];
        elem[pos++] = static_cast<char>(column[i]);
        for (int l = 1; l < profile[i]; ++l)
          for (int s = 0; s < k; ++s) {
            const auto from = children.offsets[i] + level_start[l - 1];
            for (std::uint64_t w = 0; w < level_width[l - 1]; ++w) elem[pos++] = (*kids[s])[from + w];
          }
      }
      local.push_back(elem);
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
#pragma omp critical
    merged.insert(merged.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  out.elements = std::move(merged);
  return out;
}

}  // namespace

std::uint64_t trajectory_count(const LocalRule& rule, int observation_depth, int steps, const Budget& budget) {
  if (observation_depth < 1 || steps < 1) throw InvalidInput("trajectory needs n >= 1 and t >= 1");
  std::vector<int> profile(static_cast<std::size_t>(steps), observation_depth);
  return trajectory_elements(rule, profile, budget).elements.size();
}

}  // namespace parallel

namespace serial {

std::vector<std::uint64_t> image_histogram(const LocalRule& rule, int level, const Budget& budget) {
  const auto s = histogram_shape(rule, level, budget);
  const RuleEvaluator eval(rule);
  std::vector<std::uint64_t> counts(s.image_count, 0);
  std::vector<Letter> cells(s.domain_cells, 0), image(s.image_cells);
  do {
    eval.apply_into(cells, image);
    ++counts[letters_key(image, rule.alphabet_size())];
  } while (next_letters(cells, rule.alphabet_size()));
  return counts;
}

std::uint64_t trajectory_count(const LocalRule& rule, int observation_depth, int steps, const Budget& budget) {
  if (observation_depth < 1 || steps < 1) throw InvalidInput("trajectory needs n >= 1 and t >= 1");
  const auto& g = rule.geometry();
  const int depth = observation_depth + (steps - 1) * rule.radius();
  const auto cells = g.delta_size(depth);
  budget.require(saturating_pow(static_cast<std::uint64_t>(rule.alphabet_size()), cells),
                 "enumerating trajectory bases");
  std::set<std::string> seen;
  std::vector<Letter> base(cells, 0);
  do {
    const auto tuple = trajectory(rule, Pattern(g, rule.alphabet_size(), depth, base), observation_depth, steps);
    std::string key;
    for (const auto& e : tuple.entries) key.append(e.letters().begin(), e.letters().end());
    seen.insert(std::move(key));
  } while (next_letters(base, rule.alphabet_size()));
  return seen.size();
}

}  // namespace serial

}  // namespace treeca
