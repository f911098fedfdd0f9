#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "reidtrace/cli.hpp"
#include "reidtrace/text.hpp"

namespace reidtrace {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool valid_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  }
  return true;
}

struct ImageLine {
  std::size_t line;
  Word word;
};

struct Cursor {
  std::string_view text;
  std::size_t line;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && is_space(text[pos])) ++pos;
  }
  std::size_t column() const { return pos + 1; }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line, column(), message); }
};

}  // namespace

ProblemSpec parse_spec(std::string_view text) {
  std::optional<Alphabet> alphabet;
  std::vector<std::size_t> name_columns;
  std::size_t generators_line = 0;
  std::map<std::size_t, ImageLine> phi, psi;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    Cursor cur{line, line_no};
    cur.skip_space();
    if (cur.pos == line.size()) continue;

    const std::size_t colon = line.find(':', cur.pos);
    if (colon == std::string_view::npos) cur.fail("expected 'generators:', 'phi:' or 'psi:'");
    std::string_view directive = line.substr(cur.pos, colon - cur.pos);
    while (!directive.empty() && is_space(directive.back())) directive.remove_suffix(1);

    if (directive == "generators") {
      if (alphabet) cur.fail("generators declared twice");
      cur.pos = colon + 1;
      std::vector<std::string> names;
      std::map<std::string, std::size_t> seen;
      for (;;) {
        cur.skip_space();
        if (cur.pos == line.size()) break;
        const std::size_t name_start = cur.pos;
        while (cur.pos < line.size() && !is_space(line[cur.pos])) ++cur.pos;
        std::string name(line.substr(name_start, cur.pos - name_start));
        if (!valid_name(name)) {
          throw ParseError(line_no, name_start + 1, "invalid generator name '" + name + "'");
        }
        if (seen.count(name)) throw ParseError(line_no, name_start + 1, "duplicate generator '" + name + "'");
        seen.emplace(name, names.size());
        names.push_back(std::move(name));
        name_columns.push_back(name_start + 1);
      }
      if (names.empty()) cur.fail("no generators declared");
      alphabet = Alphabet(std::move(names));
      generators_line = line_no;
      continue;
    }

    if (directive != "phi" && directive != "psi") cur.fail("unknown directive '" + std::string(directive) + "'");
    if (!alphabet) cur.fail("'generators:' must come before image lines");
    auto& images = directive == "phi" ? phi : psi;

    cur.pos = colon + 1;
    cur.skip_space();
    const std::size_t name_start = cur.pos;
    while (cur.pos < line.size() && !is_space(line[cur.pos]) && line.substr(cur.pos, 2) != "->") ++cur.pos;
    const std::string_view name = line.substr(name_start, cur.pos - name_start);
    if (name.empty()) cur.fail("expected a generator name");
    const auto g = alphabet->index_of(name);
    if (!g) throw ParseError(line_no, name_start + 1, "unknown generator '" + std::string(name) + "'");
    cur.skip_space();
    if (line.substr(cur.pos, 2) != "->") cur.fail("expected '->'");
    cur.pos += 2;
    if (images.count(*g)) {
      throw ParseError(line_no, name_start + 1,
                       "duplicate image for " + std::string(directive) + "(" + std::string(name) + ")");
    }
    Word w = parse_word(*alphabet, line.substr(cur.pos), line_no, cur.pos + 1);
    images.emplace(*g, ImageLine{line_no, std::move(w)});
  }

  if (!alphabet) throw ParseError(line_no, 1, "missing 'generators:' line");

  auto collect = [&](const std::map<std::size_t, ImageLine>& images, const char* map) {
    std::vector<Word> out;
    for (std::size_t g = 0; g < alphabet->rank(); ++g) {
      auto it = images.find(g);
      if (it == images.end()) {
        throw ParseError(generators_line, name_columns[g],
                         std::string("missing image ") + map + "(" + alphabet->name(g) + ")");
      }
      out.push_back(it->second.word);
    }
    return out;
  };

  ProblemSpec spec{*alphabet, Endomorphism(*alphabet, collect(phi, "phi")), Endomorphism::identity(*alphabet),
                   !psi.empty()};
  if (spec.psi_given) spec.psi = Endomorphism(*alphabet, collect(psi, "psi"));
  return spec;
}

std::string format_spec(const ProblemSpec& spec) {
  std::ostringstream out;
  out << "generators:";
  for (const auto& name : spec.alphabet.names()) out << ' ' << name;
  out << '\n';
  for (std::size_t g = 0; g < spec.alphabet.rank(); ++g) {
    out << "phi: " << spec.alphabet.name(g) << " -> " << format_word(spec.alphabet, spec.phi.image(g)) << '\n';
  }
  if (spec.psi_given) {
    for (std::size_t g = 0; g < spec.alphabet.rank(); ++g) {
      out << "psi: " << spec.alphabet.name(g) << " -> " << format_word(spec.alphabet, spec.psi.image(g)) << '\n';
    }
  }
  return out.str();
}

}  // namespace reidtrace
