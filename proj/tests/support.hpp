// Random generators and small helpers shared by the test suites.

#ifndef REIDTRACE_TESTS_SUPPORT_HPP_
#define REIDTRACE_TESTS_SUPPORT_HPP_

#include <random>
#include <string>
#include <vector>

#include "reidtrace/freegroup.hpp"
#include "reidtrace/text.hpp"

namespace reidtrace::testing {

inline Alphabet alphabet_of_rank(std::size_t rank) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f"};
  std::vector<std::string> out(names, names + rank);
  return Alphabet(out);
}

inline Alphabet abc() { return alphabet_of_rank(3); }

inline Word W(const Alphabet& al, const std::string& text) { return parse_word(al, text); }

inline Letter random_letter(std::mt19937& rng, std::size_t rank) {
  std::uniform_int_distribution<std::uint32_t> g(0, static_cast<std::uint32_t>(rank - 1));
  std::bernoulli_distribution flip(0.5);
  return Letter{g(rng), flip(rng)};
}

/// Uniform length in [min_len, max_len], letters independent (so usually unreduced).
inline Word random_word(std::mt19937& rng, std::size_t rank, std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::vector<Letter> out(len(rng));
  for (auto& x : out) x = random_letter(rng, rank);
  return Word(std::move(out));
}

inline Word random_reduced_word(std::mt19937& rng, std::size_t rank, std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  const std::size_t n = len(rng);
  std::vector<Letter> out;
  while (out.size() < n) {
    Letter x = random_letter(rng, rank);
    if (!out.empty() && out.back() == x.inverse()) continue;
    out.push_back(x);
  }
  return Word(std::move(out));
}

inline Endomorphism random_endo(std::mt19937& rng, std::size_t rank, std::size_t min_len, std::size_t max_len) {
  std::vector<Word> images;
  for (std::size_t g = 0; g < rank; ++g) images.push_back(random_reduced_word(rng, rank, min_len, max_len));
  return Endomorphism(alphabet_of_rank(rank), std::move(images));
}

/// phi, psi from the rank-3 worked example.
inline Endomorphism example_phi() {
  const Alphabet al = abc();
  return Endomorphism(al, {W(al, "a c b^-1"), W(al, "a b"), W(al, "b")});
}

inline Endomorphism example_psi() {
  const Alphabet al = abc();
  return Endomorphism(al, {W(al, "a^-1 c b^-1"), W(al, "c"), W(al, "b^-1 a")});
}

inline Endomorphism circle_map(std::int64_t degree) {
  const Alphabet al = alphabet_of_rank(1);
  return Endomorphism(al, {power(gen(0), degree)});
}

}  // namespace reidtrace::testing

#endif  // REIDTRACE_TESTS_SUPPORT_HPP_
