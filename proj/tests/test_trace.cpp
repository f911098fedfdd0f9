#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reidtrace/fox.hpp"
#include "reidtrace/trace.hpp"
#include "support.hpp"

using namespace reidtrace;
using namespace reidtrace::testing;

namespace {

GroupRingElement sum_of(std::initializer_list<std::pair<Word, std::int64_t>> terms) {
  GroupRingElement out;
  for (const auto& [w, c] : terms) out.add_term(w, c);
  return out;
}

std::int64_t trace_of(const IntMatrix& m) {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

std::vector<std::int64_t> coefficients(const ReidemeisterTrace& t) {
  std::vector<std::int64_t> out;
  for (const auto& term : t.terms) out.push_back(term.coefficient);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("raw trace of the rank-3 example") {
  const Alphabet al = abc();
  const GroupRingElement expected = sum_of({{W(al, "a"), -1},
                                            {W(al, "a^2"), -1},
                                            {W(al, "a b c^-1"), -1},
                                            {W(al, "a c b^-1"), -1},
                                            {W(al, "b a^-1 b"), -1}});
  CHECK(raw_trace(example_phi(), example_psi()) == expected);
}

TEST_CASE("reduced trace of the rank-3 example") {
  const Alphabet al = abc();
  const ReidemeisterTrace t = reduce_trace(raw_trace(example_phi(), example_psi()), example_phi(), example_psi());
  CHECK(t.status == MergeStatus::resolved);
  REQUIRE(t.terms.size() == 3u);
  CHECK(t.terms[0] == TraceTerm{-1, W(al, "a")});
  CHECK(t.terms[1] == TraceTerm{-3, W(al, "a^2")});
  CHECK(t.terms[2] == TraceTerm{-1, W(al, "a c b^-1")});
  CHECK(nielsen_bound(t) == NielsenBound{3, 3});

  // the class a^-1 c b^-1 from the literature is the same class
  const TwistedConjugacy classes(example_phi(), example_psi());
  CHECK(classes.decide(W(al, "a^-1 c b^-1"), t.terms[2].representative).is_equivalent());
}

TEST_CASE("circle maps") {
  const Alphabet al = alphabet_of_rank(1);
  CHECK(raw_trace(circle_map(3), circle_map(1)) == sum_of({{W(al, "a"), -1}, {W(al, "a^2"), -1}}));
  for (int n = 0; n <= 6; ++n) {
    for (int m = 0; m <= n; ++m) {
      const GroupRingElement raw = raw_trace(circle_map(n), circle_map(m));
      CHECK(raw.coefficient_sum() == m - n);
      const ReidemeisterTrace t = reduce_trace(raw, circle_map(n), circle_map(m));
      CHECK(t.status == MergeStatus::resolved);
      CHECK(nielsen_bound(t) == NielsenBound{n - m, n - m});
      if (n == m) CHECK(raw.is_zero());
    }
  }
}

TEST_CASE("edge cases") {
  const Alphabet al = alphabet_of_rank(1);
  // identity pair: 1 - (1 + 1 - 1) = 0
  const Endomorphism id = Endomorphism::identity(al);
  CHECK(raw_trace(id, id).is_zero());
  CHECK(reduce_trace(GroupRingElement{}, id, id).terms.empty());
  CHECK(nielsen_bound(ReidemeisterTrace{}) == NielsenBound{0, 0});
  // constant maps: phi(a) = psi(a) = 1 gives 1 - (0 + 1 - 0) = 0
  const Endomorphism trivial(al, {Word{}});
  CHECK(raw_trace(trivial, trivial).is_zero());
  // phi trivial, psi identity: the terms a^-1 cancel, leaving the one fixed point
  CHECK(raw_trace(trivial, id) == GroupRingElement::one());
  CHECK_THROWS_AS(raw_trace(id, example_psi()), AlphabetMismatch);
}

TEST_CASE("augmentation equals 1 - rank - tr(Phi) + tr(Psi)") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Endomorphism phi = random_endo(rng, rank, 0, 4);
    const Endomorphism psi = random_endo(rng, rank, 0, 4);
    const std::int64_t expected = 1 - static_cast<std::int64_t>(rank) - trace_of(abelianize_endo(phi).matrix) +
                                  trace_of(abelianize_endo(psi).matrix);
    CHECK(raw_trace(phi, psi).coefficient_sum() == expected);
    CHECK(raw_trace_delta(phi, psi).coefficient_sum() == expected);
  }
}

TEST_CASE("the two trace forms differ termwise by twisting with the generator") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Endomorphism phi = random_endo(rng, rank, 0, 4);
    const Endomorphism psi = random_endo(rng, rank, 0, 4);
    for (std::uint32_t a = 0; a < rank; ++a) {
      const Word& pa = phi.image(a);
      const Word& qa = psi.image(a);
      const GroupRingElement fox_term =
          left_multiply(multiply(pa, Word{inv(a)}), involution(fox_derivative(a, qa)));
      CHECK(left_multiply(pa, right_multiply(delta_derivative(a, qa), invert(qa))) == fox_term);
    }
    const TwistedConjugacy classes(phi, psi);
    CHECK(compare_traces(raw_trace(phi, psi), raw_trace_delta(phi, psi), classes) == TraceComparison::match);
  }
}

TEST_CASE("fixed point trace") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Endomorphism phi = random_endo(rng, rank, 0, 4);
    const Endomorphism id = Endomorphism::identity(phi.alphabet());
    CHECK(raw_trace(phi, id) == fixed_point_raw(phi));
    const ReidemeisterTrace t = fixed_point_trace(phi);
    CHECK(t == reduce_trace(fixed_point_raw(phi), phi, id));
  }
  // Wecken-style sanity: the identity on a circle has empty trace
  CHECK(fixed_point_trace(circle_map(1)).terms.empty());
  // degree 2 on the circle has a single essential class
  const ReidemeisterTrace t = fixed_point_trace(circle_map(2));
  REQUIRE(t.terms.size() == 1u);
  CHECK(t.terms[0].coefficient == -1);
}

TEST_CASE("reduce_trace invariants") {
  std::mt19937 rng(44);
  DecisionConfig config;
  config.max_witness_len = 4;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const TwistedConjugacy classes(random_endo(rng, rank, 1, 3), random_endo(rng, rank, 1, 3), config);
    const GroupRingElement raw = raw_trace(classes.phi(), classes.psi());
    const ReidemeisterTrace t = reduce_trace(raw, classes);

    std::int64_t total = 0;
    for (std::size_t i = 0; i < t.terms.size(); ++i) {
      CHECK(t.terms[i].coefficient != 0);
      total += t.terms[i].coefficient;
      if (i > 0) CHECK(ShortlexLess{}(t.terms[i - 1].representative, t.terms[i].representative));
      // each representative is a word that occurs in the raw element
      CHECK(raw.coefficient(t.terms[i].representative) != 0);
    }
    // every raw term belongs to at most one surviving class
    for (const auto& [w, c] : raw.terms()) {
      int hits = 0;
      for (const auto& term : t.terms) hits += classes.decide(w, term.representative).is_equivalent();
      CHECK(hits <= 1);
    }
    if (t.status == MergeStatus::resolved) {
      CHECK(t.unknown_pairs.empty());
      CHECK(total == raw.coefficient_sum());
      for (std::size_t i = 0; i < t.terms.size(); ++i)
        for (std::size_t j = i + 1; j < t.terms.size(); ++j)
          CHECK(classes.decide(t.terms[i].representative, t.terms[j].representative).is_distinct());
    } else {
      CHECK_FALSE(t.unknown_pairs.empty());
    }
    const NielsenBound b = nielsen_bound(t);
    CHECK(b.lower <= b.upper);
    CHECK(b.upper == static_cast<std::int64_t>(t.terms.size()));
  }
}

TEST_CASE("reduction is invariant under replacing terms by twisted conjugates") {
  const Alphabet al = abc();
  const TwistedConjugacy classes(example_phi(), example_psi());
  std::mt19937 rng(45);
  const GroupRingElement raw = raw_trace(example_phi(), example_psi());
  for (int trial = 0; trial < 10; ++trial) {
    GroupRingElement moved;
    for (const auto& [w, c] : raw.terms()) moved.add_term(classes.twist(random_reduced_word(rng, 3, 0, 1), w), c);
    const ReidemeisterTrace t = reduce_trace(moved, classes);
    CHECK(coefficients(t) == std::vector<std::int64_t>{-3, -1, -1});
    CHECK(compare_traces(raw, moved, classes) == TraceComparison::match);
  }
}

TEST_CASE("nielsen bound with unresolved pairs") {
  const Alphabet al = abc();
  ReidemeisterTrace t;
  t.terms = {{1, W(al, "a")}, {-1, W(al, "b")}, {2, W(al, "c")}};
  t.status = MergeStatus::partially_resolved;
  t.unknown_pairs = {{0, 1}};
  // a and b might cancel each other
  CHECK(nielsen_bound(t) == NielsenBound{1, 3});
  t.unknown_pairs = {{0, 2}};
  CHECK(nielsen_bound(t) == NielsenBound{2, 3});
}

TEST_CASE("compare_traces verdicts") {
  const Alphabet al = abc();
  const TwistedConjugacy classes(example_phi(), example_psi());
  const GroupRingElement raw = raw_trace(example_phi(), example_psi());
  CHECK(compare_traces(raw, raw, classes) == TraceComparison::match);
  // different augmentation
  CHECK(compare_traces(raw, raw + GroupRingElement(W(al, "a")), classes) == TraceComparison::mismatch);
  // same augmentation, different multiset
  GroupRingElement shifted = raw - GroupRingElement(W(al, "a")) + GroupRingElement(W(al, "a^2"));
  CHECK(compare_traces(raw, shifted, classes) == TraceComparison::mismatch);

  const Endomorphism id = Endomorphism::identity(alphabet_of_rank(1));
  CHECK(compare_traces(raw_trace(id, id), GroupRingElement{}, TwistedConjugacy(id, id)) == TraceComparison::match);
}
