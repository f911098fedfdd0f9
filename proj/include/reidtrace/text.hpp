// Text syntax for words and group ring elements.
//
//   word ::= "1" | (name ("^-1" | "^" int)?)+
//
// Tokens are separated by whitespace; inside a token generator names are
// matched greedily against the alphabet, so "acb^-1" and "a c b^-1" parse
// to the same word over {a, b, c}.

#ifndef REIDTRACE_TEXT_HPP_
#define REIDTRACE_TEXT_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "reidtrace/freegroup.hpp"

namespace reidtrace {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Parses a word. `line` and `first_column` (1-based) locate `text` inside
/// a larger input for error reporting.
Word parse_word(const Alphabet& alphabet, std::string_view text, std::size_t line = 1,
                std::size_t first_column = 1);

/// Canonical display: letters separated by spaces, runs of a positive
/// letter written x^k, inverses written x^-1, the empty word written 1.
std::string format_word(const Alphabet& alphabet, const Word& w);

/// "c·[w] ..." with explicit signs after the first term, or "0".
std::string format_element(const Alphabet& alphabet, const GroupRingElement& x);

}  // namespace reidtrace

#endif  // REIDTRACE_TEXT_HPP_
