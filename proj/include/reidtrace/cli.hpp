// Problem files and the command-line front end.
//
// Problem file grammar (one directive per line, blank lines and '#'
// comments ignored):
//
//   generators: <name>+
//   phi: <name> -> <word>
//   psi: <name> -> <word>
//
// Every generator needs a phi image. psi lines are optional as a whole;
// without them psi is the identity.

#ifndef REIDTRACE_CLI_HPP_
#define REIDTRACE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "reidtrace/freegroup.hpp"

namespace reidtrace {

struct ProblemSpec {
  Alphabet alphabet;
  Endomorphism phi;
  Endomorphism psi;
  bool psi_given = false;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Throws ParseError with the offending line and column.
ProblemSpec parse_spec(std::string_view text);
std::string format_spec(const ProblemSpec& spec);

enum ExitStatus : int {
  exit_ok = 0,
  exit_mismatch = 1,
  exit_parse_error = 2,
  exit_overflow = 3,
};

/// Runs one invocation; args excludes the program name. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reidtrace

#endif  // REIDTRACE_CLI_HPP_
