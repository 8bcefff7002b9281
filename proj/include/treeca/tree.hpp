#pragma once

// Combinatorics of the rooted k-ary tree and finite blocks on it.
//
// Vertices are words over {0..k-1}. Δ_n (the words shorter than n) is laid out in level
// order: index(ε) = 0 and index(vσ) = k·index(v) + σ + 1. Δ_n is then the index prefix
// [0, delta_size(n)), and the k^l descendants of a vertex at relative depth l occupy a
// contiguous index range.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treeca {

using Letter = std::uint8_t;
inline constexpr int kMaxAlphabet = 256;

class TreeGeometry {
 public:
  explicit TreeGeometry(int arity);

  int arity() const noexcept { return arity_; }

  /// |Δ_n|: (k^n - 1)/(k - 1), or n when k = 1. Throws ShapeError on overflow.
  std::uint64_t delta_size(int n) const;
  /// k^n, the number of vertices on level n.
  std::uint64_t level_size(int n) const;

  std::uint64_t child(std::uint64_t index, int sigma) const noexcept {
    return static_cast<std::uint64_t>(arity_) * index + static_cast<std::uint64_t>(sigma) + 1;
  }
  /// Index of the descendant at relative depth `rel_depth` with lexicographic rank `rank`
  /// among the k^rel_depth words of that length.
  std::uint64_t descendant(std::uint64_t index, int rel_depth, std::uint64_t rank) const;
  int level_of(std::uint64_t index) const;

  bool operator==(const TreeGeometry&) const = default;

 private:
  int arity_;
};

struct Word {
  std::vector<int> letters;

  std::size_t length() const noexcept { return letters.size(); }
  bool operator==(const Word&) const = default;
  friend Word operator+(Word a, const Word& b) {
    a.letters.insert(a.letters.end(), b.letters.begin(), b.letters.end());
    return a;
  }
};

/// "" or "e" is the empty word; otherwise one digit per letter ("01" is the word 0·1).
Word parse_word(std::string_view text);
std::string to_string(const Word& w);

/// Level-order index. Throws InvalidInput when a letter is outside {0..k-1}.
std::uint64_t index_of_word(const TreeGeometry& g, const Word& v);
Word word_of_index(const TreeGeometry& g, std::uint64_t index);
/// Rank of v among the words of its length, i.e. its digits read in base k.
std::uint64_t lexicographic_rank(const TreeGeometry& g, const Word& v);
Word word_of_rank(const TreeGeometry& g, int length, std::uint64_t rank);

/// A block p: Δ_n → A with n ≥ 1, stored densely in level order.
class Pattern {
 public:
  Pattern(TreeGeometry geometry, int alphabet_size, int depth, std::vector<Letter> letters);

  static Pattern filled(TreeGeometry geometry, int alphabet_size, int depth, Letter letter = 0);

  const TreeGeometry& geometry() const noexcept { return geometry_; }
  int alphabet_size() const noexcept { return alphabet_size_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return letters_.size(); }
  std::span<const Letter> letters() const noexcept { return letters_; }

  Letter operator[](std::uint64_t index) const { return letters_[index]; }
  Letter at(const Word& v) const;

  /// Copy with one cell changed.
  Pattern with(std::uint64_t index, Letter letter) const;

  bool operator==(const Pattern& other) const;
  /// Lexicographic on the level-order letters, i.e. numeric order of pattern keys.
  std::strong_ordering operator<=>(const Pattern& other) const;

 private:
  TreeGeometry geometry_;
  int alphabet_size_;
  int depth_;
  std::vector<Letter> letters_;
};

Pattern restrict(const Pattern& p, int n);
/// p^v restricted to what p determines: result(w) = p(vw).
Pattern subtree(const Pattern& p, const Word& v);
/// top ◁ (children): `top` on Δ_n and children[i] on v_i·Δ_m, v_i the i-th word of length n.
Pattern graft(const Pattern& top, std::span<const Pattern> children);

/// Distance 1/level between truncations; level == 0 means the patterns agree on their
/// whole support (not that the configurations are equal).
struct TruncatedDistance {
  int level = 0;
  double value() const noexcept { return level == 0 ? 0.0 : 1.0 / level; }
  bool operator==(const TruncatedDistance&) const = default;
};
TruncatedDistance truncated_distance(const Pattern& a, const Pattern& b);

/// Text form: digits for |A| ≤ 10 ("0110011"), comma-separated decimals otherwise.
std::string to_string(const Pattern& p);
std::string letters_to_string(std::span<const Letter> letters, int alphabet_size);
std::vector<Letter> parse_letters(std::string_view text, int alphabet_size);
/// Depth is recovered from the letter count; a count that is no |Δ_n| is an error.
Pattern parse_pattern(std::string_view text, const TreeGeometry& g, int alphabet_size);
/// The n with |Δ_n| = size; throws InvalidInput when none or several exist.
int depth_for_size(const TreeGeometry& g, std::uint64_t size);

/// True when alphabet^cells fits in a 64-bit key.
bool key_fits(int alphabet_size, std::uint64_t cells) noexcept;
/// Base-|A| value of the letters, first letter most significant.
std::uint64_t letters_key(std::span<const Letter> letters, int alphabet_size);
void letters_from_key(std::uint64_t key, int alphabet_size, std::span<Letter> out);
std::uint64_t pattern_key(const Pattern& p);
Pattern pattern_from_key(const TreeGeometry& g, int alphabet_size, int depth, std::uint64_t key);

/// Advances letters to the next tuple in lexicographic order; false after the last one.
bool next_letters(std::span<Letter> letters, int alphabet_size) noexcept;

}  // namespace treeca
