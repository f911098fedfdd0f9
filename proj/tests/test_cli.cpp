#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "reidtrace/cli.hpp"
#include "reidtrace/text.hpp"
#include "support.hpp"

using namespace reidtrace;
using namespace reidtrace::testing;

namespace {

const char* const rank3_spec =
    "generators: a b c\n"
    "phi: a -> a c b^-1\n"
    "phi: b -> a b\n"
    "phi: c -> b\n"
    "psi: a -> a^-1 c b^-1\n"
    "psi: b -> c\n"
    "psi: c -> b^-1 a\n";

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

std::string spec_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("reidtrace_cli_" + name + ".txt");
  std::ofstream(path) << text;
  return path.string();
}

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

void expect_parse_error(const std::string& text, std::size_t line, std::size_t column) {
  try {
    parse_spec(text);
    FAIL("accepted: " << text);
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

}  // namespace

TEST_CASE("parse_spec examples") {
  const ProblemSpec circle = parse_spec("generators: a\nphi: a -> a^3\npsi: a -> a");
  CHECK(circle.alphabet.rank() == 1u);
  CHECK(circle.phi == circle_map(3));
  CHECK(circle.psi == circle_map(1));

  const ProblemSpec ex = parse_spec(rank3_spec);
  CHECK(ex.phi == example_phi());
  CHECK(ex.psi == example_psi());
  CHECK(ex.psi_given);

  const ProblemSpec trivial = parse_spec("generators: a\nphi: a -> 1");
  CHECK(trivial.phi.image(0).empty());
  CHECK_FALSE(trivial.psi_given);
  CHECK(trivial.psi == Endomorphism::identity(trivial.alphabet));

  // comments, blank lines, free spacing, and multi-letter names
  const ProblemSpec spaced = parse_spec("# header\n\n  generators:  x1   y \nphi:x1->x1 y^-1 # tail\nphi : y -> y^2\n");
  CHECK(spaced.alphabet.names() == std::vector<std::string>{"x1", "y"});
  CHECK(spaced.phi.image(0) == Word{gen(0), inv(1)});
  CHECK(spaced.phi.image(1) == Word{gen(1), gen(1)});
}

TEST_CASE("parse errors carry line and column") {
  expect_parse_error("generators: a\nphi: a -> a d", 2, 13);           // unknown generator
  expect_parse_error("generators: a b a\nphi: a -> a", 1, 17);         // duplicate generator
  expect_parse_error("generators: a b\nphi: a -> a", 1, 15);           // missing image
  expect_parse_error("generators: a\nphi: a -> a^-2", 2, 12);          // malformed exponent
  expect_parse_error("generators: a\nphi: a -> a^", 2, 12);
  expect_parse_error("generators: a\nphi: a -> a\nphi: a -> a", 3, 6);  // duplicate image
  expect_parse_error("phi: a -> a", 1, 1);
  expect_parse_error("generators: a\nchi: a -> a", 2, 1);
  expect_parse_error("generators: a\nphi: a a", 2, 8);
  expect_parse_error("", 1, 1);
}

TEST_CASE("spec round trip") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    ProblemSpec spec{alphabet_of_rank(rank), random_endo(rng, rank, 0, 5), random_endo(rng, rank, 0, 5), true};
    if (trial % 3 == 0) {
      spec.psi = Endomorphism::identity(spec.alphabet);
      spec.psi_given = false;
    }
    CHECK(parse_spec(format_spec(spec)) == spec);
  }
}

TEST_CASE("trace and nielsen") {
  const std::string ex = spec_file("rank3", rank3_spec);
  const Outcome t = invoke({"trace", ex});
  CHECK(t.status == exit_ok);
  CHECK(t.out.rfind("-1·[a] -3·[a^2] -1·[a c b^-1]  (resolved)\nraw: ", 0) == 0);

  const Outcome q = invoke({"--quiet", "trace", ex});
  CHECK(q.out == "-1·[a] -3·[a^2] -1·[a c b^-1]  (resolved)\n");

  const Outcome n = invoke({"nielsen", ex, "--quiet"});
  CHECK(n.out == "N = 3\n");

  const std::string circle = spec_file("circle", "generators: a\nphi: a -> a^3\npsi: a -> a\n");
  CHECK(invoke({"--quiet", "nielsen", circle}).out == "N = 2\n");
}

TEST_CASE("check, fox, oracle and compare") {
  const std::string ex = spec_file("rank3_b", rank3_spec);
  CHECK(invoke({"check", ex, "a^2", "a b c^-1"}).out.rfind("equivalent (witness gamma = ", 0) == 0);
  CHECK(invoke({"check", ex, "a", "a^2"}).out.rfind("distinct (abelian quotient)", 0) == 0);
  CHECK(invoke({"check", ex, "a^2", "a^-1 c b^-1"}).out.rfind("distinct (class-2 nilpotent quotient)", 0) == 0);
  CHECK(invoke({"--nilpotent-level", "1", "check", ex, "a^2", "a^-1 c b^-1"}).out.rfind("unknown", 0) == 0);

  const std::string fixed = spec_file("fixed", "generators: a b\nphi: a -> a^-1 b\nphi: b -> b a^-1 b^-1 a^-1\n");
  CHECK(invoke({"check", fixed, "a^-1", "b a^-1 b^-1"}).out.rfind("distinct (finite quotient)", 0) == 0);
  CHECK(invoke({"--no-finite-quotients", "check", fixed, "a^-1", "b a^-1 b^-1"}).out.rfind("unknown", 0) == 0);

  const Outcome fox = invoke({"fox", ex});
  CHECK(fox.status == exit_ok);
  CHECK(fox.out.find("d/da phi(a) = 1·[1]\n") != std::string::npos);
  CHECK(invoke({"delta", ex}).out.find("D/Da psi(a) = -1·[a^-1 c b^-1]\n") != std::string::npos);

  const Outcome oracle = invoke({"oracle", ex, "--epsilon", "1/100"});
  CHECK(oracle.status == exit_ok);
  CHECK(oracle.out.rfind("epsilon 1/100\n", 0) == 0);
  CHECK(oracle.out.find("reduced: -1·[a] -3·[a^2] -1·[a c b^-1]  (resolved)") != std::string::npos);

  const Outcome cmp = invoke({"compare", ex});
  CHECK(cmp.status == exit_ok);
  CHECK(cmp.out.find("verdict: match\n") != std::string::npos);

  const std::string id = spec_file("identity", "generators: a\nphi: a -> a\n");
  const Outcome idc = invoke({"compare", id});
  CHECK(idc.status == exit_ok);
  CHECK(idc.out == "algebraic: 0  (resolved)\ngeometric: 0  (resolved)\nverdict: match\n");
}

TEST_CASE("exit codes") {
  const std::string bad = spec_file("bad", "generators: a\nphi: a -> q\n");
  const Outcome parse = invoke({"trace", bad});
  CHECK(parse.status == exit_parse_error);
  CHECK(parse.err.find("line 2, column 11") != std::string::npos);

  CHECK(invoke({"trace", "/nonexistent/spec.txt"}).status == exit_parse_error);
  CHECK(invoke({"frobnicate"}).status == exit_parse_error);
  CHECK(invoke({"--format", "xml", "trace", bad}).status == exit_parse_error);
  CHECK(invoke({"--nilpotent-level", "3", "trace", bad}).status == exit_parse_error);

  const std::string ex = spec_file("rank3_c", rank3_spec);
  CHECK(invoke({"--epsilon", "1/2", "oracle", ex}).status == exit_parse_error);
  CHECK(invoke({"--epsilon", "banana", "oracle", ex}).status == exit_parse_error);
  CHECK(invoke({"check", ex, "a", "z"}).status == exit_parse_error);

  const std::string huge = spec_file("huge", "generators: a\nphi: a -> a^99999999999999999999\n");
  CHECK(invoke({"trace", huge}).status == exit_parse_error);
}

TEST_CASE("json output") {
  const std::string ex = spec_file("rank3_d", rank3_spec);
  const Outcome t = invoke({"--format", "json", "trace", ex});
  REQUIRE(t.status == exit_ok);
  const auto j = nlohmann::json::parse(t.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "trace");
  CHECK(j["status"] == "ok");
  CHECK(j["spec"]["generators"] == nlohmann::json::array({"a", "b", "c"}));
  const auto& terms = j["result"]["terms"];
  REQUIRE(terms.size() == 3u);
  CHECK(terms[0] == nlohmann::json::array({-1, "a"}));
  CHECK(terms[1] == nlohmann::json::array({-3, "a^2"}));
  CHECK(j["result"]["merge_status"] == "resolved");

  const auto c = nlohmann::json::parse(invoke({"compare", ex, "--format", "json"}).out);
  CHECK(c["result"]["verdict"] == "match");
  const auto n = nlohmann::json::parse(invoke({"nielsen", ex, "--format", "json"}).out);
  CHECK(n["result"]["lower"] == 3);
  CHECK(n["result"]["upper"] == 3);
}

TEST_CASE("reports are deterministic") {
  const std::string ex = spec_file("rank3_e", rank3_spec);
  for (const char* cmd : {"trace", "nielsen", "fox", "delta", "oracle", "compare"}) {
    for (const char* fmt : {"text", "json"}) {
      const Outcome first = invoke({"--format", fmt, cmd, ex});
      const Outcome second = invoke({"--format", fmt, cmd, ex});
      CHECK(first.status == second.status);
      CHECK(first.out == second.out);
    }
  }
}
