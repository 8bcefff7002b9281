#include "treeca/tree.hpp"

#include <algorithm>
#include <charconv>

#include "treeca/budget.hpp"
#include "treeca/error.hpp"

namespace treeca {

TreeGeometry::TreeGeometry(int arity) : arity_(arity) {
  if (arity < 1) throw InvalidInput("arity must be at least 1, got " + std::to_string(arity));
}

std::uint64_t TreeGeometry::level_size(int n) const {
  if (n < 0) throw ShapeError("negative level");
  const auto v = saturating_pow(static_cast<std::uint64_t>(arity_), static_cast<std::uint64_t>(n));
  if (v == kSaturated) throw ShapeError("level " + std::to_string(n) + " is too large to index");
  return v;
}

std::uint64_t TreeGeometry::delta_size(int n) const {
  if (n < 0) throw ShapeError("negative depth");
  if (arity_ == 1) return static_cast<std::uint64_t>(n);
  const std::uint64_t k = static_cast<std::uint64_t>(arity_);
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (int i = 0; i < n; ++i) {
    if (total > kSaturated - level) throw ShapeError("depth " + std::to_string(n) + " is too large to index");
    total += level;
    if (i + 1 < n) {
      if (level > kSaturated / k) throw ShapeError("depth " + std::to_string(n) + " is too large to index");
      level *= k;
    }
  }
  return total;
}

std::uint64_t TreeGeometry::descendant(std::uint64_t index, int rel_depth, std::uint64_t rank) const {
  // index(vw) = k^|w|·index(v) + index(w)
  return level_size(rel_depth) * index + delta_size(rel_depth) + rank;
}

int TreeGeometry::level_of(std::uint64_t index) const {
  if (arity_ == 1) return static_cast<int>(index);
  int level = 0;
  std::uint64_t start = 0, width = 1;
  while (index >= start + width) {
    start += width;
    width *= static_cast<std::uint64_t>(arity_);
    ++level;
  }
  return level;
}

Word parse_word(std::string_view text) {
  Word w;
  if (text == "e" || text == "eps") return w;
  for (char c : text) {
    if (c < '0' || c > '9') throw InvalidInput("invalid word '" + std::string(text) + "'");
    w.letters.push_back(c - '0');
  }
  return w;
}

std::string to_string(const Word& w) {
  if (w.letters.empty()) return "e";
  std::string s;
  for (int c : w.letters) s += static_cast<char>('0' + c);
  return s;
}

std::uint64_t lexicographic_rank(const TreeGeometry& g, const Word& v) {
  std::uint64_t rank = 0;
  for (int c : v.letters) {
    if (c < 0 || c >= g.arity())
      throw InvalidInput("invalid word: letter " + std::to_string(c) + " is not below arity " +
                         std::to_string(g.arity()));
    rank = rank * static_cast<std::uint64_t>(g.arity()) + static_cast<std::uint64_t>(c);
  }
  return rank;
}

std::uint64_t index_of_word(const TreeGeometry& g, const Word& v) {
  std::uint64_t index = 0;
  for (int c : v.letters) {
    if (c < 0 || c >= g.arity())
      throw InvalidInput("invalid word: letter " + std::to_string(c) + " is not below arity " +
                         std::to_string(g.arity()));
    index = g.child(index, c);
  }
  return index;
}

Word word_of_rank(const TreeGeometry& g, int length, std::uint64_t rank) {
  Word w;
  w.letters.assign(static_cast<std::size_t>(length), 0);
  const auto k = static_cast<std::uint64_t>(g.arity());
  for (int i = length - 1; i >= 0; --i) {
    w.letters[static_cast<std::size_t>(i)] = static_cast<int>(rank % k);
    rank /= k;
  }
  return w;
}

Word word_of_index(const TreeGeometry& g, std::uint64_t index) {
  const int level = g.level_of(index);
  return word_of_rank(g, level, index - g.delta_size(level));
}

// ---------------------------------------------------------------------------

Pattern::Pattern(TreeGeometry geometry, int alphabet_size, int depth, std::vector<Letter> letters)
    : geometry_(geometry), alphabet_size_(alphabet_size), depth_(depth), letters_(std::move(letters)) {
  if (alphabet_size < 1 || alphabet_size > kMaxAlphabet)
    throw InvalidInput("alphabet size must be in 1.." + std::to_string(kMaxAlphabet));
  if (depth < 1) throw ShapeError("patterns must have depth at least 1");
  if (letters_.size() != geometry_.delta_size(depth))
    throw ShapeError("pattern of depth " + std::to_string(depth) + " needs " +
                     std::to_string(geometry_.delta_size(depth)) + " letters, got " +
                     std::to_string(letters_.size()));
  for (Letter a : letters_)
    if (a >= alphabet_size) throw ShapeError("letter " + std::to_string(a) + " outside the alphabet");
}

Pattern Pattern::filled(TreeGeometry geometry, int alphabet_size, int depth, Letter letter) {
  if (depth < 1) throw ShapeError("patterns must have depth at least 1");
  return Pattern(geometry, alphabet_size, depth,
                 std::vector<Letter>(geometry.delta_size(depth), letter));
}

Letter Pattern::at(const Word& v) const {
  if (static_cast<int>(v.length()) >= depth_) throw ShapeError("word " + to_string(v) + " outside the support");
  return letters_[index_of_word(geometry_, v)];
}

Pattern Pattern::with(std::uint64_t index, Letter letter) const {
  auto copy = letters_;
  if (index >= copy.size()) throw ShapeError("cell index out of range");
  copy[index] = letter;
  return Pattern(geometry_, alphabet_size_, depth_, std::move(copy));
}

bool Pattern::operator==(const Pattern& other) const {
  return geometry_ == other.geometry_ && alphabet_size_ == other.alphabet_size_ && depth_ == other.depth_ &&
         letters_ == other.letters_;
}

std::strong_ordering Pattern::operator<=>(const Pattern& other) const {
  if (auto c = depth_ <=> other.depth_; c != 0) return c;
  return letters_ <=> other.letters_;
}

Pattern restrict(const Pattern& p, int n) {
  if (n < 1 || n > p.depth())
    throw ShapeError("cannot restrict a depth-" + std::to_string(p.depth()) + " pattern to depth " +
                     std::to_string(n));
  auto letters = p.letters().first(p.geometry().delta_size(n));
  return Pattern(p.geometry(), p.alphabet_size(), n, {letters.begin(), letters.end()});
}

Pattern subtree(const Pattern& p, const Word& v) {
  const int len = static_cast<int>(v.length());
  if (len >= p.depth())
    throw ShapeError("subtree at a word of length " + std::to_string(len) + " leaves nothing of a depth-" +
                     std::to_string(p.depth()) + " pattern");
  const auto& g = p.geometry();
  const std::uint64_t root = index_of_word(g, v);
  const int depth = p.depth() - len;
  std::vector<Letter> out;
  out.reserve(g.delta_size(depth));
  const auto src = p.letters();
  for (int l = 0; l < depth; ++l) {
    const auto first = g.descendant(root, l, 0);
    const auto width = g.level_size(l);
    out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(first),
               src.begin() + static_cast<std::ptrdiff_t>(first + width));
  }
  return Pattern(g, p.alphabet_size(), depth, std::move(out));
}

Pattern graft(const Pattern& top, std::span<const Pattern> children) {
  const auto& g = top.geometry();
  const int n = top.depth();
  const auto expected = g.level_size(n);
  if (children.size() != expected)
    throw ShapeError("graft needs " + std::to_string(expected) + " children, got " +
                     std::to_string(children.size()));
  const int m = children.front().depth();
  for (const auto& c : children)
    if (!(c.geometry() == g) || c.alphabet_size() != top.alphabet_size() || c.depth() != m)
      throw ShapeError("graft children must share geometry, alphabet and depth");

  std::vector<Letter> out(g.delta_size(n + m));
  std::copy(top.letters().begin(), top.letters().end(), out.begin());
  const auto level_start = g.delta_size(n);
  for (std::uint64_t i = 0; i < expected; ++i) {
    const auto src = children[i].letters();
    for (int l = 0; l < m; ++l) {
      const auto dst = g.descendant(level_start + i, l, 0);
      const auto from = g.delta_size(l);
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(from), g.level_size(l),
                  out.begin() + static_cast<std::ptrdiff_t>(dst));
    }
  }
  return Pattern(g, top.alphabet_size(), n + m, std::move(out));
}

TruncatedDistance truncated_distance(const Pattern& a, const Pattern& b) {
  if (!(a.geometry() == b.geometry()) || a.alphabet_size() != b.alphabet_size() || a.depth() != b.depth())
    throw ShapeError("distance needs patterns of the same shape");
  const auto la = a.letters(), lb = b.letters();
  for (std::size_t i = 0; i < la.size(); ++i)
    if (la[i] != lb[i]) return {a.geometry().level_of(i) + 1};
  return {};
}

// ---------------------------------------------------------------------------

std::string letters_to_string(std::span<const Letter> letters, int alphabet_size) {
  std::string s;
  if (alphabet_size <= 10) {
    s.reserve(letters.size());
    for (Letter a : letters) s += static_cast<char>('0' + a);
    return s;
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(letters[i]);
  }
  return s;
}

std::string to_string(const Pattern& p) { return letters_to_string(p.letters(), p.alphabet_size()); }

std::vector<Letter> parse_letters(std::string_view text, int alphabet_size) {
  std::vector<Letter> out;
  auto bad = [&](const std::string& why) {
    return InvalidInput("malformed pattern '" + std::string(text) + "': " + why);
  };
  if (alphabet_size <= 10) {
    for (char c : text) {
      if (c < '0' || c > '9') throw bad("expected digits");
      const int v = c - '0';
      if (v >= alphabet_size) throw bad("letter " + std::to_string(v) + " outside the alphabet");
      out.push_back(static_cast<Letter>(v));
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    int v = -1;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) throw bad("expected decimal letters");
    if (v < 0 || v >= alphabet_size) throw bad("letter " + std::to_string(v) + " outside the alphabet");
    out.push_back(static_cast<Letter>(v));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int depth_for_size(const TreeGeometry& g, std::uint64_t size) {
  if (size == 0) throw InvalidInput("empty pattern");
  int found = 0, matches = 0;
  for (int n = 1;; ++n) {
    const auto s = g.delta_size(n);
    if (s == size) {
      found = n;
      ++matches;
    }
    if (s >= size) break;
  }
  if (matches == 0) throw InvalidInput("no block size has " + std::to_string(size) + " cells");
  if (matches > 1) throw InvalidInput("ambiguous pattern length " + std::to_string(size));
  return found;
}

Pattern parse_pattern(std::string_view text, const TreeGeometry& g, int alphabet_size) {
  auto letters = parse_letters(text, alphabet_size);
  const int depth = depth_for_size(g, letters.size());
  return Pattern(g, alphabet_size, depth, std::move(letters));
}

bool key_fits(int alphabet_size, std::uint64_t cells) noexcept {
  return saturating_pow(static_cast<std::uint64_t>(alphabet_size), cells) != kSaturated;
}

std::uint64_t letters_key(std::span<const Letter> letters, int alphabet_size) {
  if (!key_fits(alphabet_size, letters.size())) throw BudgetExceeded("pattern too large for a 64-bit key");
  std::uint64_t key = 0;
  const auto base = static_cast<std::uint64_t>(alphabet_size);
  for (Letter a : letters) key = key * base + a;
  return key;
}

void letters_from_key(std::uint64_t key, int alphabet_size, std::span<Letter> out) {
  const auto base = static_cast<std::uint64_t>(alphabet_size);
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Letter>(key % base);
    key /= base;
  }
}

std::uint64_t pattern_key(const Pattern& p) { return letters_key(p.letters(), p.alphabet_size()); }

Pattern pattern_from_key(const TreeGeometry& g, int alphabet_size, int depth, std::uint64_t key) {
  std::vector<Letter> letters(g.delta_size(depth));
  letters_from_key(key, alphabet_size, letters);
  return Pattern(g, alphabet_size, depth, std::move(letters));
}

bool next_letters(std::span<Letter> letters, int alphabet_size) noexcept {
  for (std::size_t i = letters.size(); i-- > 0;) {
    if (letters[i] + 1 < alphabet_size) {
      ++letters[i];
      return true;
    }
    letters[i] = 0;
  }
  return false;
}

}  // namespace treeca
