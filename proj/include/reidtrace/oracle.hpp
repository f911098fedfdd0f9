// Geometric coincidence simulator for regular pairs of maps on a bouquet of
// circles.
//
// Each circle |a| is parameterized by [0, 1] with both ends at the wedge
// point. A regular map sends each of its intervals affinely onto the open
// circle named by the interval's label (reversing orientation for inverse
// letters), or constantly to the wedge point for the trivial label.
//
// For endomorphisms phi, psi the pair is built from the padded words
//     u_a = phi(a) a^-1 a,        v_a = a a^-1 psi(a) a^-1 a
// (kept unreduced). g puts the first letter of v_a on (0, 1/2) and spreads the
// rest evenly over (1/2, 1); f is constant on (0, e), (1/2 - e, 1/2 + e) and
// (1 - e, 1), spreads all but the last letter of u_a over (e, 1/2 - e) and puts
// the last letter on (1/2 + e, 1 - e). All arithmetic is exact.

#ifndef REIDTRACE_ORACLE_HPP_
#define REIDTRACE_ORACLE_HPP_

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "reidtrace/freegroup.hpp"

namespace reidtrace {

using Rational = boost::rational<std::int64_t>;

inline constexpr std::size_t no_interval = std::numeric_limits<std::size_t>::max();

struct LabeledInterval {
  std::uint32_t circle = 0;
  Rational lo;
  Rational hi;
  std::optional<Letter> label;          // nullopt: constant at the wedge point
  std::size_t letter_index = no_interval;  // position of the label in u_a or v_a

  Rational width() const { return hi - lo; }
  /// Affine restriction x -> slope * x + offset onto [0, 1] of the label's circle.
  Rational slope() const;
  Rational offset() const;
};

struct RegularMap {
  std::vector<std::vector<LabeledInterval>> circles;  // contiguous partition of (0, 1)
};

struct RegularPair {
  RegularMap f;
  RegularMap g;
  Rational epsilon;
  std::vector<Word> u;  // words laid out by f, one per circle
  std::vector<Word> v;  // words laid out by g
};

struct CoincidencePoint {
  std::uint32_t circle = 0;
  Rational coordinate;
  int index = 1;
  Word class_word;
  std::size_t f_interval = no_interval;  // no_interval for the wedge point
  std::size_t g_interval = no_interval;
};

class EpsilonOutOfRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Regular pair laid out from arbitrary (unreduced) words of length >= 2.
/// Requires 0 < epsilon < 1/(4 max n_a) and epsilon < 1/(2 max (m_a - 1)), the
/// latter keeping 1/2 + epsilon and 1 - epsilon inside g's outer intervals.
RegularPair regular_pair_from_words(std::vector<Word> u, std::vector<Word> v, Rational epsilon);

/// 1/(8 (max(n_a, m_a) + 2)) for the padded words of (phi, psi).
Rational default_epsilon(const Endomorphism& phi, const Endomorphism& psi);

RegularPair build_regular_pair(const Endomorphism& phi, const Endomorphism& psi, Rational epsilon);
RegularPair build_regular_pair(const Endomorphism& phi, const Endomorphism& psi);

/// Isolated coincidence points, ordered by circle then coordinate, with the
/// wedge point first. The coincidence at each [1/2]_a is omitted: its index
/// is zero.
std::vector<CoincidencePoint> enumerate_coincidences(const RegularPair& pair);

/// sum index * class_word over the coincidence points.
GroupRingElement geometric_trace(const std::vector<CoincidencePoint>& points);
GroupRingElement geometric_trace(const RegularPair& pair);

/// Places where f and g could meet without being caught by
/// enumerate_coincidences: coinciding interval endpoints other than 0, 1/2
/// and 1, and g passing through the wedge point inside a constant zone of f.
std::vector<std::string> partition_violations(const RegularPair& pair);

/// Per-interval comparison of observed local traces with the closed forms
///   f-interval I in (0, 1/2) labeled h_i:   -h_1 ... h_{i-1} d_{l_1}(h_i)
///   g-interval J in (1/2, 1) labeled l_i:   h_1 ... h_{n-1} i(l_1 ... l_{i-1} d_{h_n}(l_i))
/// and, for the last g-interval of each circle, the value 0.
struct RegionCheck {
  enum class Kind { top_half, bottom_half, last_interval };

  Kind kind;
  std::uint32_t circle;
  std::size_t interval;  // index into f (top_half) or g (otherwise)
  GroupRingElement predicted;
  GroupRingElement observed;

  bool holds() const { return predicted == observed; }
};

std::vector<RegionCheck> region_checks(const RegularPair& pair,
                                       const std::vector<CoincidencePoint>& points);

/// Line-oriented interval table: "<circle> <map> <lo> <hi> <label>".
std::string format_intervals(const Alphabet& alphabet, const RegularPair& pair);

}  // namespace reidtrace

#endif  // REIDTRACE_ORACLE_HPP_
