#include "reidtrace/text.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace reidtrace {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Longest generator name that is a prefix of `rest`.
std::optional<std::size_t> match_generator(const Alphabet& alphabet, std::string_view rest,
                                           std::size_t& length) {
  std::optional<std::size_t> best;
  length = 0;
  for (std::size_t g = 0; g < alphabet.rank(); ++g) {
    const std::string& n = alphabet.name(g);
    if (n.size() > length && rest.substr(0, n.size()) == n) {
      best = g;
      length = n.size();
    }
  }
  return best;
}

}  // namespace

Word parse_word(const Alphabet& alphabet, std::string_view text, std::size_t line,
                std::size_t first_column) {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  bool saw_token = false;
  bool saw_one = false;
  auto column = [&](std::size_t p) { return first_column + p; };

  while (pos < text.size()) {
    if (is_space(text[pos])) {
      ++pos;
      continue;
    }
    if (text[pos] == '1' && (pos + 1 == text.size() || is_space(text[pos + 1]))) {
      if (saw_token || saw_one) throw ParseError(line, column(pos), "'1' must be the whole word");
      saw_one = true;
      ++pos;
      continue;
    }
    if (saw_one) throw ParseError(line, column(pos), "'1' must be the whole word");
    std::size_t len = 0;
    auto g = match_generator(alphabet, text.substr(pos), len);
    if (!g) {
      std::size_t end = pos;
      while (end < text.size() && !is_space(text[end]) && text[end] != '^') ++end;
      throw ParseError(line, column(pos),
                       "unknown generator '" + std::string(text.substr(pos, end - pos)) + "'");
    }
    pos += len;
    saw_token = true;
    std::int64_t exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      std::size_t caret = pos;
      ++pos;
      if (text.substr(pos, 2) == "-1" &&
          (pos + 2 == text.size() || !std::isdigit(static_cast<unsigned char>(text[pos + 2])))) {
        exponent = -1;
        pos += 2;
      } else {
        std::size_t end = pos;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        std::int64_t k = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, k);
        if (end == pos || ec != std::errc{} || k < 1 || k > 1'000'000) {
          throw ParseError(line, column(caret), "malformed exponent (expected ^-1 or ^k, k >= 1)");
        }
        (void)ptr;
        exponent = k;
        pos = end;
      }
    }
    Word run = power(gen(static_cast<std::uint32_t>(*g)), exponent);
    letters.insert(letters.end(), run.begin(), run.end());
  }
  if (!saw_token && !saw_one) throw ParseError(line, column(pos), "empty word (write 1)");
  return Word(std::move(letters));
}

std::string format_word(const Alphabet& alphabet, const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < w.size();) {
    Letter x = w[i];
    std::size_t j = i + 1;
    if (!x.inverted) {
      while (j < w.size() && w[j] == x) ++j;
    }
    if (!first) out << ' ';
    first = false;
    out << alphabet.name(x.generator);
    if (x.inverted) {
      out << "^-1";
    } else if (j - i > 1) {
      out << '^' << (j - i);
    }
    i = j;
  }
  return out.str();
}

std::string format_element(const Alphabet& alphabet, const GroupRingElement& x) {
  if (x.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [w, c] : x.terms()) {
    if (!first) out << ' ' << (c > 0 ? "+" : "");
    first = false;
    out << c << "·[" << format_word(alphabet, w) << ']';
  }
  return out.str();
}

}  // namespace reidtrace
