#include "reidtrace/freegroup.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace reidtrace {

namespace detail {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

}  // namespace detail

// Alphabet -------------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string_view> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw std::invalid_argument("generator names must be nonempty");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate generator '" + n + "'");
  }
}

std::optional<std::size_t> Alphabet::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

// Word -----------------------------------------------------------------------

bool Word::is_reduced() const noexcept {
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    if (letters_[i] == letters_[i - 1].inverse()) return false;
  }
  return true;
}

std::size_t Word::min_rank() const noexcept {
  std::size_t r = 0;
  for (Letter x : letters_) r = std::max<std::size_t>(r, x.generator + 1);
  return r;
}

Word Word::concat(const Word& other) const {
  std::vector<Letter> out;
  out.reserve(letters_.size() + other.letters_.size());
  out.insert(out.end(), letters_.begin(), letters_.end());
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, letters_.size());
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + n));
}

bool ShortlexLess::operator()(const Word& x, const Word& y) const noexcept {
  if (x.size() != y.size()) return x.size() < y.size();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (Letter x : w) {
    h ^= x.order_key() + 1;
    h *= 0x100000001b3ull;
  }
  return h;
}

Word power(Letter x, std::int64_t k) {
  if (k < 0) {
    x = x.inverse();
    k = -k;
  }
  return Word(std::vector<Letter>(static_cast<std::size_t>(k), x));
}

Word reduce(const Word& w) {
  // single stack pass; free reduction is confluent so this is the normal form
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter x : w) {
    if (!out.empty() && out.back() == x.inverse()) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return Word(std::move(out));
}

Word multiply(const Word& u, const Word& v) { return reduce(u.concat(v)); }

Word invert(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(it->inverse());
  return Word(std::move(out));
}

std::vector<std::int64_t> exponent_sums(const Word& w, std::size_t rank) {
  std::vector<std::int64_t> v(rank, 0);
  for (Letter x : w) {
    if (x.generator >= rank) throw AlphabetMismatch("letter outside alphabet");
    v[x.generator] += x.sign();
  }
  return v;
}

void require_within(const Alphabet& alphabet, const Word& w) {
  if (w.min_rank() > alphabet.rank()) {
    throw AlphabetMismatch("word uses a generator outside the alphabet of rank " +
                           std::to_string(alphabet.rank()));
  }
}

// Endomorphism ---------------------------------------------------------------

Endomorphism::Endomorphism(Alphabet alphabet, std::vector<Word> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
  if (images_.size() != alphabet_.rank()) {
    throw std::invalid_argument("endomorphism needs exactly one image per generator");
  }
  for (const auto& w : images_) require_within(alphabet_, w);
}

Endomorphism Endomorphism::identity(const Alphabet& alphabet) {
  std::vector<Word> images;
  for (std::uint32_t g = 0; g < alphabet.rank(); ++g) images.push_back(Word{gen(g)});
  return Endomorphism(alphabet, std::move(images));
}

Word Endomorphism::apply(Letter x) const {
  if (x.generator >= rank()) throw AlphabetMismatch("letter outside endomorphism alphabet");
  const Word& img = images_[x.generator];
  return x.inverted ? invert(reduce(img)) : reduce(img);
}

Word Endomorphism::apply(const Word& w) const {
  require_within(alphabet_, w);
  std::vector<Letter> out;
  for (Letter x : w) {
    const Word& img = images_[x.generator];
    if (x.inverted) {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) {
        out.push_back(it->inverse());
      }
    } else {
      out.insert(out.end(), img.begin(), img.end());
    }
  }
  return reduce(Word(std::move(out)));
}

void require_same_alphabet(const Endomorphism& phi, const Endomorphism& psi) {
  if (!(phi.alphabet() == psi.alphabet())) {
    throw AlphabetMismatch("endomorphisms are defined over different alphabets");
  }
}

// GroupRingElement -----------------------------------------------------------

GroupRingElement::GroupRingElement(const Word& word, std::int64_t coefficient) {
  add_term(word, coefficient);
}

std::int64_t GroupRingElement::coefficient(const Word& w) const {
  auto it = terms_.find(reduce(w));
  return it == terms_.end() ? 0 : it->second;
}

std::int64_t GroupRingElement::coefficient_sum() const {
  std::int64_t s = 0;
  for (const auto& [w, c] : terms_) s = detail::checked_add(s, c);
  return s;
}

GroupRingElement& GroupRingElement::add_term(const Word& w, std::int64_t coefficient) {
  if (coefficient == 0) return *this;
  Word key = w.is_reduced() ? w : reduce(w);
  auto [it, inserted] = terms_.try_emplace(std::move(key), coefficient);
  if (!inserted) {
    it->second = detail::checked_add(it->second, coefficient);
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, detail::checked_sub(0, c));
  return *this;
}

GroupRingElement GroupRingElement::operator-() const { return scale(-1, *this); }

GroupRingElement scale(std::int64_t k, const GroupRingElement& x) {
  GroupRingElement out;
  for (const auto& [w, c] : x.terms()) out.add_term(w, detail::checked_mul(k, c));
  return out;
}

GroupRingElement left_multiply(const Word& w, const GroupRingElement& x) {
  GroupRingElement out;
  for (const auto& [v, c] : x.terms()) out.add_term(w.concat(v), c);
  return out;
}

GroupRingElement right_multiply(const GroupRingElement& x, const Word& w) {
  GroupRingElement out;
  for (const auto& [v, c] : x.terms()) out.add_term(v.concat(w), c);
  return out;
}

GroupRingElement multiply(const GroupRingElement& x, const GroupRingElement& y) {
  GroupRingElement out;
  for (const auto& [u, c] : x.terms()) {
    for (const auto& [v, d] : y.terms()) out.add_term(u.concat(v), detail::checked_mul(c, d));
  }
  return out;
}

GroupRingElement involution(const GroupRingElement& x) {
  GroupRingElement out;
  for (const auto& [w, c] : x.terms()) out.add_term(invert(w), c);
  return out;
}

}  // namespace reidtrace
