// Free groups of finite rank: words, endomorphisms and the integer group ring.

#ifndef REIDTRACE_FREEGROUP_HPP_
#define REIDTRACE_FREEGROUP_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reidtrace {

/// Raised when a fixed-width integer computation would overflow.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Raised when values built over different alphabets are combined.
class AlphabetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
}  // namespace detail

/// Ordered list of distinct generator names. All vector and matrix
/// indexing elsewhere follows this order.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);
  Alphabet(std::initializer_list<std::string> names)
      : Alphabet(std::vector<std::string>(names)) {}

  std::size_t rank() const noexcept { return names_.size(); }
  const std::string& name(std::size_t generator) const { return names_.at(generator); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

/// A generator or the inverse of a generator.
struct Letter {
  std::uint32_t generator = 0;
  bool inverted = false;

  constexpr Letter inverse() const noexcept { return {generator, !inverted}; }
  constexpr int sign() const noexcept { return inverted ? -1 : 1; }
  // a < a^-1 < b < b^-1 < ...
  constexpr std::uint32_t order_key() const noexcept {
    return 2 * generator + (inverted ? 1u : 0u);
  }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr bool operator<(Letter x, Letter y) noexcept {
    return x.order_key() < y.order_key();
  }
};

constexpr Letter gen(std::uint32_t g) { return {g, false}; }
constexpr Letter inv(std::uint32_t g) { return {g, true}; }

/// A finite, possibly unreduced, sequence of letters. The empty word is
/// the identity. Words never reduce themselves; see reduce().
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  bool is_reduced() const noexcept;
  /// Largest generator index plus one, or 0 for the empty word.
  std::size_t min_rank() const noexcept;

  /// Letter-by-letter concatenation without cancellation.
  Word concat(const Word& other) const;
  Word prefix(std::size_t n) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Shortlex order: shorter words first, then lexicographic by Letter order.
struct ShortlexLess {
  bool operator()(const Word& x, const Word& y) const noexcept;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

Word power(Letter x, std::int64_t k);

Word reduce(const Word& w);
/// Reduced product u·v.
Word multiply(const Word& u, const Word& v);
Word invert(const Word& w);

/// Exponent-sum vector of w, of length `rank`.
std::vector<std::int64_t> exponent_sums(const Word& w, std::size_t rank);

/// Throws AlphabetMismatch if w uses a generator outside the alphabet.
void require_within(const Alphabet& alphabet, const Word& w);

/// Endomorphism of the free group on `alphabet`, given by the images of
/// the generators. Images are stored exactly as given (possibly unreduced).
class Endomorphism {
 public:
  Endomorphism(Alphabet alphabet, std::vector<Word> images);

  static Endomorphism identity(const Alphabet& alphabet);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t rank() const noexcept { return alphabet_.rank(); }
  const Word& image(std::size_t generator) const { return images_.at(generator); }
  const std::vector<Word>& images() const noexcept { return images_; }

  /// Reduced image of w.
  Word apply(const Word& w) const;
  Word apply(Letter x) const;

  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
};

void require_same_alphabet(const Endomorphism& phi, const Endomorphism& psi);

/// Element of the integer group ring ZG: a finite integer combination of
/// reduced words. Zero coefficients are never stored.
class GroupRingElement {
 public:
  using Terms = std::map<Word, std::int64_t, ShortlexLess>;

  GroupRingElement() = default;
  /// The element 1·word (word is reduced first).
  explicit GroupRingElement(const Word& word, std::int64_t coefficient = 1);

  static GroupRingElement one() { return GroupRingElement(Word{}); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::int64_t coefficient(const Word& w) const;
  /// Image under the augmentation map ZG -> Z.
  std::int64_t coefficient_sum() const;

  /// Adds coefficient·reduce(w) in place.
  GroupRingElement& add_term(const Word& w, std::int64_t coefficient);

  GroupRingElement& operator+=(const GroupRingElement& other);
  GroupRingElement& operator-=(const GroupRingElement& other);
  GroupRingElement operator-() const;

  friend GroupRingElement operator+(GroupRingElement x, const GroupRingElement& y) {
    return x += y;
  }
  friend GroupRingElement operator-(GroupRingElement x, const GroupRingElement& y) {
    return x -= y;
  }
  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

 private:
  Terms terms_;
};

GroupRingElement scale(std::int64_t k, const GroupRingElement& x);
/// w·x, term-wise.
GroupRingElement left_multiply(const Word& w, const GroupRingElement& x);
/// x·w, term-wise.
GroupRingElement right_multiply(const GroupRingElement& x, const Word& w);
GroupRingElement multiply(const GroupRingElement& x, const GroupRingElement& y);
/// Sum c_k g_k  ->  sum c_k g_k^-1.
GroupRingElement involution(const GroupRingElement& x);

}  // namespace reidtrace

#endif  // REIDTRACE_FREEGROUP_HPP_
