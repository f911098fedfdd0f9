#include "reidtrace/fox.hpp"

#include <vector>

namespace reidtrace {

GroupRingElement fox_derivative(std::uint32_t generator, const Word& w) {
  const Word r = reduce(w);
  GroupRingElement out;
  // prefix h_1 ... h_{k-1}; d(x^-1) = -x^-1, so that term is -(prefix x^-1)
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k].generator != generator) continue;
    if (r[k].inverted) {
      out.add_term(r.prefix(k + 1), -1);
    } else {
      out.add_term(r.prefix(k), 1);
    }
  }
  return out;
}

GroupRingElement delta_derivative(std::uint32_t generator, const Word& w) {
  const Word r = reduce(w);
  const auto letters = r.letters();
  GroupRingElement out;
  // D(x) = 1 contributes the suffix after x. The axioms force
  // D(x^-1) = -x^-1 (expand D(x x^-1) = 0), so that term is minus the suffix
  // starting at x^-1 itself.
  for (std::size_t k = 0; k < letters.size(); ++k) {
    if (letters[k].generator != generator) continue;
    const auto from = letters.begin() + static_cast<std::ptrdiff_t>(k) + (letters[k].inverted ? 0 : 1);
    out.add_term(Word(std::vector<Letter>(from, letters.end())), letters[k].inverted ? -1 : 1);
  }
  return out;
}

}  // namespace reidtrace
