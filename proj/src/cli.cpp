#include "reidtrace/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "reidtrace/conjugacy.hpp"
#include "reidtrace/fox.hpp"
#include "reidtrace/oracle.hpp"
#include "reidtrace/text.hpp"
#include "reidtrace/trace.hpp"

namespace reidtrace {

namespace {

using json = nlohmann::ordered_json;

constexpr int schema_version = 1;

struct Options {
  std::string command;
  std::string spec_path;
  std::string alpha;
  std::string beta;
  std::size_t max_witness_len = 6;
  int nilpotent_level = 2;
  bool no_finite = false;
  std::string epsilon;
  std::string format = "text";
  bool quiet = false;
};

struct Report {
  json result = json::object();
  std::string status = "ok";
  std::ostringstream text;
  int exit = exit_ok;
};

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    buf << in.rdbuf();
  }
  return buf.str();
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long long n = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(n);
    }
    const long long p = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(text);
    const std::string rest = text.substr(slash + 1);
    const long long q = std::stoll(rest, &used);
    if (used != rest.size() || q == 0) throw std::invalid_argument(text);
    return Rational(p, q);
  } catch (const std::logic_error&) {
    throw EpsilonOutOfRange("malformed --epsilon '" + text + "' (expected p/q)");
  }
}

json spec_json(const ProblemSpec& spec) {
  json j;
  j["generators"] = spec.alphabet.names();
  json phi = json::object(), psi = json::object();
  for (std::size_t g = 0; g < spec.alphabet.rank(); ++g) {
    phi[spec.alphabet.name(g)] = format_word(spec.alphabet, spec.phi.image(g));
    psi[spec.alphabet.name(g)] = format_word(spec.alphabet, spec.psi.image(g));
  }
  j["phi"] = phi;
  j["psi"] = psi;
  j["psi_is_identity"] = !spec.psi_given;
  return j;
}

json element_json(const Alphabet& alphabet, const GroupRingElement& x) {
  json terms = json::array();
  for (const auto& [w, c] : x.terms()) terms.push_back(json::array({c, format_word(alphabet, w)}));
  return terms;
}

const char* status_name(MergeStatus s) {
  return s == MergeStatus::resolved ? "resolved" : "partially_resolved";
}

std::string format_trace(const Alphabet& alphabet, const ReidemeisterTrace& trace) {
  std::ostringstream out;
  if (trace.terms.empty()) out << '0';
  for (std::size_t i = 0; i < trace.terms.size(); ++i) {
    const auto& t = trace.terms[i];
    if (i) out << ' ' << (t.coefficient > 0 ? "+" : "");
    out << t.coefficient << "·[" << format_word(alphabet, t.representative) << ']';
  }
  out << "  (" << (trace.status == MergeStatus::resolved ? "resolved" : "partially resolved") << ')';
  return out.str();
}

json trace_json(const Alphabet& alphabet, const ReidemeisterTrace& trace) {
  json j;
  json terms = json::array();
  for (const auto& t : trace.terms) terms.push_back(json::array({t.coefficient, format_word(alphabet, t.representative)}));
  j["terms"] = terms;
  j["merge_status"] = status_name(trace.status);
  json pairs = json::array();
  for (auto [x, y] : trace.unknown_pairs) pairs.push_back(json::array({x, y}));
  j["unknown_pairs"] = pairs;
  return j;
}

void describe_unknown(const Alphabet& alphabet, const ReidemeisterTrace& trace, std::ostream& out) {
  for (auto [x, y] : trace.unknown_pairs) {
    out << "undecided: [" << format_word(alphabet, trace.terms[x].representative) << "] vs ["
        << format_word(alphabet, trace.terms[y].representative) << "]\n";
  }
}

std::string format_bound(const NielsenBound& b) {
  if (b.lower == b.upper) return "N = " + std::to_string(b.lower);
  return "N in [" + std::to_string(b.lower) + ", " + std::to_string(b.upper) + "]";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::equivalent: return "equivalent";
    case Verdict::distinct: return "distinct";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

const char* comparison_name(TraceComparison c) {
  switch (c) {
    case TraceComparison::match: return "match";
    case TraceComparison::mismatch: return "mismatch";
    case TraceComparison::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void derivative_tables(const ProblemSpec& spec, bool delta, Report& r) {
  const Alphabet& al = spec.alphabet;
  const char* op = delta ? "D/D" : "d/d";
  json tables = json::object();
  for (const auto& [map_name, map] : {std::pair<const char*, const Endomorphism*>{"phi", &spec.phi},
                                      std::pair<const char*, const Endomorphism*>{"psi", &spec.psi}}) {
    json table = json::array();
    for (std::uint32_t a = 0; a < al.rank(); ++a) {
      for (std::uint32_t b = 0; b < al.rank(); ++b) {
        const GroupRingElement d = delta ? delta_derivative(a, map->image(b)) : fox_derivative(a, map->image(b));
        r.text << op << al.name(a) << ' ' << map_name << '(' << al.name(b) << ") = " << format_element(al, d) << '\n';
        table.push_back({{"generator", al.name(a)}, {"image_of", al.name(b)}, {"value", element_json(al, d)}});
      }
    }
    tables[map_name] = table;
  }
  r.result["derivatives"] = tables;
}

Report execute(const Options& opt, const ProblemSpec& spec) {
  Report r;
  const Alphabet& al = spec.alphabet;
  DecisionConfig config;
  config.max_witness_len = opt.max_witness_len;
  config.nilpotent_level = opt.nilpotent_level;
  if (opt.no_finite) config.finite_homomorphism_budget = 0;

  if (opt.command == "trace" || opt.command == "nielsen") {
    const TwistedConjugacy classes(spec.phi, spec.psi, config);
    const GroupRingElement raw = raw_trace(spec.phi, spec.psi);
    const ReidemeisterTrace trace = reduce_trace(raw, classes);
    const NielsenBound bound = nielsen_bound(trace);
    if (opt.command == "trace") {
      r.text << format_trace(al, trace) << '\n';
      if (!opt.quiet) {
        r.text << "raw: " << format_element(al, raw) << '\n';
        describe_unknown(al, trace, r.text);
      }
      r.result = trace_json(al, trace);
      r.result["raw"] = element_json(al, raw);
    } else {
      r.text << format_bound(bound) << '\n';
      if (!opt.quiet) {
        r.text << "trace: " << format_trace(al, trace) << '\n';
        describe_unknown(al, trace, r.text);
      }
      r.result["lower"] = bound.lower;
      r.result["upper"] = bound.upper;
      r.result["trace"] = trace_json(al, trace);
    }
  } else if (opt.command == "fox" || opt.command == "delta") {
    derivative_tables(spec, opt.command == "delta", r);
  } else if (opt.command == "check") {
    const Word alpha = parse_word(al, opt.alpha);
    const Word beta = parse_word(al, opt.beta);
    const TwistedConjugacy classes(spec.phi, spec.psi, config);
    const DecisionOutcome d = classes.decide(alpha, beta);
    switch (d.verdict) {
      case Verdict::equivalent:
        r.text << "equivalent (witness gamma = " << format_word(al, d.witness) << ")\n";
        break;
      case Verdict::distinct:
        r.text << "distinct (" << (d.level == 1 ? "abelian quotient" : d.level == 2 ? "class-2 nilpotent quotient" : "finite quotient") << ")\n";
        break;
      case Verdict::unknown:
        r.text << "unknown\n";
        break;
    }
    if (!opt.quiet && !d.detail.empty()) r.text << d.detail << '\n';
    r.result["alpha"] = format_word(al, alpha);
    r.result["beta"] = format_word(al, beta);
    r.result["verdict"] = verdict_name(d.verdict);
    if (d.is_equivalent()) r.result["witness"] = format_word(al, d.witness);
    if (d.is_distinct()) r.result["level"] = d.level;
    r.result["detail"] = d.detail;
  } else if (opt.command == "oracle" || opt.command == "compare") {
    const Rational eps = opt.epsilon.empty() ? default_epsilon(spec.phi, spec.psi) : parse_rational(opt.epsilon);
    const RegularPair pair = build_regular_pair(spec.phi, spec.psi, eps);
    const auto points = enumerate_coincidences(pair);
    const GroupRingElement geometric = geometric_trace(points);
    const TwistedConjugacy classes(spec.phi, spec.psi, config);
    const ReidemeisterTrace geometric_reduced = reduce_trace(geometric, classes);
    const std::string eps_text = std::to_string(eps.numerator()) + "/" + std::to_string(eps.denominator());

    if (opt.command == "oracle") {
      if (!opt.quiet) {
        r.text << "epsilon " << eps_text << '\n' << format_intervals(al, pair);
        r.text << "coincidences:\n";
      }
      json pts = json::array();
      for (const auto& p : points) {
        const std::string coord = std::to_string(p.coordinate.numerator()) +
                                  (p.coordinate.denominator() == 1 ? "" : "/" + std::to_string(p.coordinate.denominator()));
        if (!opt.quiet) {
          r.text << al.name(p.circle) << ' ' << coord << ' ' << (p.index > 0 ? "+1" : "-1") << ' '
                 << format_word(al, p.class_word) << '\n';
        }
        pts.push_back({{"circle", al.name(p.circle)}, {"coordinate", coord}, {"index", p.index},
                       {"class", format_word(al, p.class_word)}});
      }
      r.text << "geometric trace: " << format_element(al, geometric) << '\n';
      r.text << "reduced: " << format_trace(al, geometric_reduced) << '\n';
      r.result["epsilon"] = eps_text;
      r.result["coincidences"] = pts;
      r.result["geometric"] = element_json(al, geometric);
      r.result["reduced"] = trace_json(al, geometric_reduced);
    } else {
      const GroupRingElement algebraic = raw_trace(spec.phi, spec.psi);
      const ReidemeisterTrace algebraic_reduced = reduce_trace(algebraic, classes);
      const TraceComparison verdict = compare_traces(algebraic, geometric, classes);
      r.text << "algebraic: " << format_trace(al, algebraic_reduced) << '\n';
      r.text << "geometric: " << format_trace(al, geometric_reduced) << '\n';
      r.text << "verdict: " << comparison_name(verdict) << '\n';
      r.result["algebraic"] = trace_json(al, algebraic_reduced);
      r.result["geometric"] = trace_json(al, geometric_reduced);
      r.result["verdict"] = comparison_name(verdict);
      r.result["epsilon"] = eps_text;
      if (verdict == TraceComparison::mismatch) {
        r.status = "mismatch";
        r.exit = exit_mismatch;
      } else if (verdict == TraceComparison::inconclusive) {
        r.status = "inconclusive";
      }
    }
  }
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Coincidence Reidemeister traces of selfmaps of bouquets of circles", "reidtrace"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--max-witness-len", opt.max_witness_len, "longest conjugating word to search")
      ->check(CLI::Range(0, 12));
  app.add_option("--nilpotent-level", opt.nilpotent_level, "deepest quotient used to separate classes")
      ->check(CLI::IsMember({1, 2}));
  app.add_option("--epsilon", opt.epsilon, "padding width p/q for the regular pair");
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--quiet", opt.quiet, "print only the result line");
  app.add_flag("--no-finite-quotients", opt.no_finite, "skip the finite quotient obstruction");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"trace", "reduced coincidence Reidemeister trace"},
      {"nielsen", "bounds on the coincidence Nielsen number"},
      {"fox", "Fox derivative tables of phi and psi"},
      {"delta", "reversed derivative tables of phi and psi"},
      {"check", "decide twisted conjugacy of two words"},
      {"oracle", "coincidence points of the regular pair"},
      {"compare", "algebraic versus geometric trace"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("spec", opt.spec_path, "problem file, or - for stdin")->required();
    if (std::string(name) == "check") {
      sub->add_option("alpha", opt.alpha)->required();
      sub->add_option("beta", opt.beta)->required();
    }
    sub->callback([&opt, sub] { opt.command = sub->get_name(); });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_parse_error;
  }

  try {
    const ProblemSpec spec = parse_spec(read_input(opt.spec_path));
    Report r = execute(opt, spec);
    if (opt.format == "json") {
      json j;
      j["schema_version"] = schema_version;
      j["command"] = opt.command;
      j["spec"] = spec_json(spec);
      j["result"] = r.result;
      j["status"] = r.status;
      out << j.dump(2) << '\n';
    } else {
      out << r.text.str();
    }
    return r.exit;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_parse_error;
  } catch (const OverflowError& e) {
    err << "overflow: " << e.what() << '\n';
    return exit_overflow;
  } catch (const EpsilonOutOfRange& e) {
    err << "error: " << e.what() << '\n';
    return exit_parse_error;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_parse_error;
  }
}

}  // namespace reidtrace
