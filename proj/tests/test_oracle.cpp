#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "reidtrace/conjugacy.hpp"
#include "reidtrace/oracle.hpp"
#include "reidtrace/trace.hpp"
#include "support.hpp"

using namespace reidtrace;
using namespace reidtrace::testing;

namespace {

// Rationals are only ever compared with rationals: boost 1.74's mixed
// rational/int operator== recurses forever under C++20 rewritten comparisons.

// Where a map sends coordinate x of a circle: nullopt for the wedge point,
// otherwise (target circle, position in (0, 1)).
using Image = std::optional<std::pair<std::uint32_t, Rational>>;

Image evaluate(const std::vector<LabeledInterval>& intervals, const Rational& x) {
  for (const auto& I : intervals) {
    if (x < I.lo || x > I.hi) continue;
    if (!I.label) return std::nullopt;
    const Rational t = I.label->inverted ? (I.hi - x) / I.width() : (x - I.lo) / I.width();
    if (t == Rational(0) || t == Rational(1)) return std::nullopt;
    return std::make_pair(I.label->generator, t);
  }
  FAIL("coordinate outside the partition");
  return std::nullopt;
}

std::int64_t diagonal_sum(const Endomorphism& e) {
  const IntMatrix m = abelianize_endo(e).matrix;
  std::int64_t t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

void check_partition(const std::vector<LabeledInterval>& intervals) {
  REQUIRE_FALSE(intervals.empty());
  CHECK(intervals.front().lo == Rational(0));
  CHECK(intervals.back().hi == Rational(1));
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    CHECK(intervals[k].lo < intervals[k].hi);
    if (k > 0) CHECK(intervals[k - 1].hi == intervals[k].lo);
  }
}

}  // namespace

TEST_CASE("layout of the regular pair") {
  const Alphabet al = abc();
  const RegularPair pair = build_regular_pair(example_phi(), example_psi());
  REQUIRE(pair.f.circles.size() == 3u);
  for (std::uint32_t c = 0; c < 3; ++c) {
    const std::size_t n = example_phi().image(c).size() + 2;
    const std::size_t m = example_psi().image(c).size() + 4;
    CHECK(pair.u[c].size() == n);
    CHECK(pair.v[c].size() == m);
    CHECK(pair.f.circles[c].size() == n + 3);
    CHECK(pair.g.circles[c].size() == m);
    check_partition(pair.f.circles[c]);
    check_partition(pair.g.circles[c]);
    CHECK(pair.g.circles[c][0].hi == Rational(1, 2));
    CHECK(pair.f.circles[c][0].hi == pair.epsilon);
  }
  // padded words stay unreduced
  CHECK(pair.u[0] == W(al, "a c b^-1 a^-1 a"));
  CHECK(pair.v[1] == W(al, "b b^-1 c b^-1 b"));
}

TEST_CASE("epsilon range") {
  const Alphabet al = alphabet_of_rank(1);
  const std::vector<Word> u{W(al, "a a a")};
  const std::vector<Word> v{W(al, "a a^-1 a a^-1 a")};
  CHECK_THROWS_AS(regular_pair_from_words(u, v, Rational(0)), EpsilonOutOfRange);
  CHECK_THROWS_AS(regular_pair_from_words(u, v, Rational(1, 12)), EpsilonOutOfRange);  // 1/(4n)
  CHECK_THROWS_AS(regular_pair_from_words(u, v, Rational(-1, 100)), EpsilonOutOfRange);
  CHECK_NOTHROW(regular_pair_from_words(u, v, Rational(1, 13)));
  CHECK_THROWS_AS(regular_pair_from_words({W(al, "a")}, v, Rational(1, 100)), std::invalid_argument);
}

TEST_CASE("coincidence points are genuine and carry the slope sign") {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Endomorphism phi = random_endo(rng, rank, 1, 4);
    const Endomorphism psi = random_endo(rng, rank, 1, 4);
    const RegularPair pair = build_regular_pair(phi, psi);
    const auto points = enumerate_coincidences(pair);
    REQUIRE_FALSE(points.empty());
    CHECK(points[0].coordinate == Rational(0));
    CHECK(points[0].index == 1);
    CHECK(points[0].class_word.empty());

    std::int64_t index_sum = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& p = points[k];
      index_sum += p.index;
      if (k == 0) continue;
      CHECK(p.coordinate > Rational(0));
      CHECK(p.coordinate < Rational(1));
      CHECK(p.coordinate != Rational(1, 2));
      const Image fx = evaluate(pair.f.circles[p.circle], p.coordinate);
      const Image gx = evaluate(pair.g.circles[p.circle], p.coordinate);
      REQUIRE(fx.has_value());
      CHECK(fx == gx);
      const auto& I = pair.f.circles[p.circle][p.f_interval];
      const auto& J = pair.g.circles[p.circle][p.g_interval];
      CHECK(I.lo < p.coordinate);
      CHECK(p.coordinate < I.hi);
      CHECK(J.lo < p.coordinate);
      CHECK(p.coordinate < J.hi);
      CHECK(p.index == (J.slope() > I.slope() ? 1 : -1));
      if (k > 1 && points[k - 1].circle == p.circle) CHECK(points[k - 1].coordinate < p.coordinate);
    }
    // the Lefschetz number
    CHECK(index_sum == 1 - static_cast<std::int64_t>(rank) - diagonal_sum(phi) + diagonal_sum(psi));
    CHECK(partition_violations(pair).empty());
  }
}

TEST_CASE("geometric trace equals the algebraic formula") {
  std::mt19937 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Endomorphism phi = random_endo(rng, rank, 1, 4);
    const Endomorphism psi = random_endo(rng, rank, 1, 4);
    const RegularPair pair = build_regular_pair(phi, psi);
    const GroupRingElement geometric = geometric_trace(pair);
    CHECK(geometric == raw_trace(phi, psi));
    CHECK(compare_traces(geometric, raw_trace_delta(phi, psi), TwistedConjugacy(phi, psi)) ==
          TraceComparison::match);
  }
  CHECK(geometric_trace(build_regular_pair(example_phi(), example_psi())) ==
        raw_trace(example_phi(), example_psi()));
}

TEST_CASE("identity pair and circle maps") {
  const Endomorphism id1 = Endomorphism::identity(alphabet_of_rank(1));
  CHECK(geometric_trace(build_regular_pair(id1, id1)).is_zero());
  // the identity of a bouquet of three circles has Lefschetz number 1 - 3
  const Endomorphism id3 = Endomorphism::identity(abc());
  CHECK(geometric_trace(build_regular_pair(id3, id3)) == GroupRingElement(Word{}, -2));
  for (int n = 1; n <= 4; ++n) {
    for (int m = 1; m <= n; ++m) {
      const GroupRingElement g = geometric_trace(build_regular_pair(circle_map(n), circle_map(m)));
      CHECK(g.coefficient_sum() == m - n);
      CHECK(g == raw_trace(circle_map(n), circle_map(m)));
    }
  }
}

TEST_CASE("region predictions hold interval by interval") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Endomorphism phi = random_endo(rng, rank, 1, 4);
    const Endomorphism psi = random_endo(rng, rank, 1, 4);
    const RegularPair pair = build_regular_pair(phi, psi);
    const auto checks = region_checks(pair, enumerate_coincidences(pair));
    std::size_t expected = 0;
    for (std::uint32_t c = 0; c < rank; ++c) expected += (pair.u[c].size() - 1) + (pair.v[c].size() - 1);
    CHECK(checks.size() == expected);
    for (const auto& rc : checks) CHECK(rc.holds());
  }
}

TEST_CASE("geometric trace does not depend on epsilon") {
  std::mt19937 rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Endomorphism phi = random_endo(rng, rank, 1, 4);
    const Endomorphism psi = random_endo(rng, rank, 1, 4);
    const Rational e = default_epsilon(phi, psi);
    const GroupRingElement reference = geometric_trace(build_regular_pair(phi, psi, e));
    for (const Rational& other : {e / 3, e * 2, e / 7 * 5}) {
      CHECK(geometric_trace(build_regular_pair(phi, psi, other)) == reference);
    }
  }
}

TEST_CASE("interval table") {
  const Alphabet al = alphabet_of_rank(1);
  const RegularPair pair = build_regular_pair(circle_map(3), circle_map(1));
  const std::string table = format_intervals(al, pair);
  std::istringstream lines(table);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == pair.f.circles[0].size() + pair.g.circles[0].size());
  CHECK(table.rfind("a f 0 ", 0) == 0);
}
