#include "reidtrace/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "reidtrace/fox.hpp"
#include "reidtrace/text.hpp"

namespace reidtrace {

Rational LabeledInterval::slope() const {
  if (!label) return Rational(0);
  return label->inverted ? -1 / width() : 1 / width();
}

Rational LabeledInterval::offset() const {
  if (!label) return Rational(0);
  return label->inverted ? hi / width() : -lo / width();
}

namespace {

const Rational half(1, 2);

std::size_t max_length(const std::vector<Word>& words) {
  std::size_t m = 0;
  for (const auto& w : words) m = std::max(m, w.size());
  return m;
}

Word padded_u(const Endomorphism& phi, std::uint32_t a) {
  return phi.image(a).concat(Word{inv(a), gen(a)});
}

Word padded_v(const Endomorphism& psi, std::uint32_t a) {
  return Word{gen(a), inv(a)}.concat(psi.image(a)).concat(Word{inv(a), gen(a)});
}

std::string format_rational(const Rational& r) {
  std::ostringstream out;
  out << r.numerator();
  if (r.denominator() != 1) out << '/' << r.denominator();
  return out.str();
}

}  // namespace

RegularPair regular_pair_from_words(std::vector<Word> u, std::vector<Word> v, Rational epsilon) {
  if (u.size() != v.size()) throw std::invalid_argument("need one u-word and one v-word per circle");
  for (const auto& w : u) {
    if (w.size() < 2) throw std::invalid_argument("regular pair words need length at least 2");
  }
  for (const auto& w : v) {
    if (w.size() < 2) throw std::invalid_argument("regular pair words need length at least 2");
  }
  const auto n_max = static_cast<std::int64_t>(max_length(u));
  const auto m_max = static_cast<std::int64_t>(max_length(v));
  if (epsilon <= Rational(0) || (!u.empty() && epsilon >= Rational(1, 4 * n_max)) ||
      (!v.empty() && epsilon >= Rational(1, 2 * (m_max - 1)))) {
    throw EpsilonOutOfRange("epsilon " + format_rational(epsilon) + " is outside (0, min(1/(4 max n), 1/(2 (max m - 1))))");
  }

  RegularPair pair;
  pair.epsilon = epsilon;
  for (std::uint32_t c = 0; c < u.size(); ++c) {
    const std::size_t n = u[c].size();
    const std::size_t m = v[c].size();

    std::vector<LabeledInterval> g;
    g.push_back({c, Rational(0), half, v[c][0], 0});
    const Rational g_step = Rational(1, 2 * static_cast<std::int64_t>(m - 1));
    for (std::size_t k = 1; k < m; ++k) {
      g.push_back({c, half + static_cast<std::int64_t>(k - 1) * g_step,
                   half + static_cast<std::int64_t>(k) * g_step, v[c][k], k});
    }
    g.back().hi = Rational(1);

    std::vector<LabeledInterval> f;
    f.push_back({c, Rational(0), epsilon, std::nullopt, no_interval});
    const Rational f_step = (half - 2 * epsilon) / static_cast<std::int64_t>(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      f.push_back({c, epsilon + static_cast<std::int64_t>(k) * f_step,
                   epsilon + static_cast<std::int64_t>(k + 1) * f_step, u[c][k], k});
    }
    f.push_back({c, half - epsilon, half + epsilon, std::nullopt, no_interval});
    f.push_back({c, half + epsilon, 1 - epsilon, u[c][n - 1], n - 1});
    f.push_back({c, 1 - epsilon, Rational(1), std::nullopt, no_interval});

    pair.f.circles.push_back(std::move(f));
    pair.g.circles.push_back(std::move(g));
  }
  pair.u = std::move(u);
  pair.v = std::move(v);
  return pair;
}

Rational default_epsilon(const Endomorphism& phi, const Endomorphism& psi) {
  std::size_t longest = 0;
  for (std::uint32_t a = 0; a < phi.rank(); ++a) {
    longest = std::max({longest, phi.image(a).size() + 2, psi.image(a).size() + 4});
  }
  return Rational(1, 8 * (static_cast<std::int64_t>(longest) + 2));
}

RegularPair build_regular_pair(const Endomorphism& phi, const Endomorphism& psi, Rational epsilon) {
  require_same_alphabet(phi, psi);
  std::vector<Word> u, v;
  for (std::uint32_t a = 0; a < phi.rank(); ++a) {
    u.push_back(padded_u(phi, a));
    v.push_back(padded_v(psi, a));
  }
  return regular_pair_from_words(std::move(u), std::move(v), epsilon);
}

RegularPair build_regular_pair(const Endomorphism& phi, const Endomorphism& psi) {
  return build_regular_pair(phi, psi, default_epsilon(phi, psi));
}

std::vector<CoincidencePoint> enumerate_coincidences(const RegularPair& pair) {
  std::vector<CoincidencePoint> points;
  points.push_back({0, Rational(0), 1, Word{}, no_interval, no_interval});

  for (std::uint32_t c = 0; c < pair.f.circles.size(); ++c) {
    const auto& fs = pair.f.circles[c];
    const auto& gs = pair.g.circles[c];
    std::vector<CoincidencePoint> local;
    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
      const LabeledInterval& I = fs[fi];
      if (!I.label) continue;
      for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        const LabeledInterval& J = gs[gi];
        if (J.label->generator != I.label->generator) continue;
        const Rational lo = std::max(I.lo, J.lo);
        const Rational hi = std::min(I.hi, J.hi);
        if (!(lo < hi)) continue;
        // slopes have different magnitudes by construction, so never parallel
        const Rational x = (J.offset() - I.offset()) / (I.slope() - J.slope());
        if (!(lo < x && x < hi)) continue;

        const bool same = *I.label == *J.label;
        const Word f_prefix = pair.u[c].prefix(I.letter_index);
        const Word g_prefix = pair.v[c].prefix(J.letter_index + (same ? 0 : 1));
        local.push_back({c, x, J.slope() > I.slope() ? 1 : -1,
                         multiply(f_prefix, invert(g_prefix)), fi, gi});
      }
    }
    std::sort(local.begin(), local.end(),
              [](const CoincidencePoint& p, const CoincidencePoint& q) { return p.coordinate < q.coordinate; });
    points.insert(points.end(), local.begin(), local.end());
  }
  return points;
}

GroupRingElement geometric_trace(const std::vector<CoincidencePoint>& points) {
  GroupRingElement out;
  for (const auto& p : points) out.add_term(p.class_word, p.index);
  return out;
}

GroupRingElement geometric_trace(const RegularPair& pair) {
  return geometric_trace(enumerate_coincidences(pair));
}

std::vector<std::string> partition_violations(const RegularPair& pair) {
  std::vector<std::string> out;
  for (std::uint32_t c = 0; c < pair.f.circles.size(); ++c) {
    std::set<Rational> f_ends, g_ends;
    for (const auto& I : pair.f.circles[c]) {
      f_ends.insert(I.lo);
      f_ends.insert(I.hi);
    }
    for (const auto& J : pair.g.circles[c]) {
      g_ends.insert(J.lo);
      g_ends.insert(J.hi);
    }
    for (const Rational& x : f_ends) {
      if (x != Rational(0) && x != half && x != Rational(1) && g_ends.count(x)) {
        out.push_back("circle " + std::to_string(c) + ": shared endpoint " + format_rational(x));
      }
    }
    for (const auto& I : pair.f.circles[c]) {
      if (I.label) continue;
      for (const Rational& x : g_ends) {
        if (I.lo < x && x < I.hi && x != half) {
          out.push_back("circle " + std::to_string(c) + ": g meets the wedge point at " +
                        format_rational(x) + " inside a constant zone of f");
        }
      }
    }
  }
  return out;
}

std::vector<RegionCheck> region_checks(const RegularPair& pair,
                                       const std::vector<CoincidencePoint>& points) {
  std::vector<RegionCheck> checks;
  for (std::uint32_t c = 0; c < pair.f.circles.size(); ++c) {
    const Word& u = pair.u[c];
    const Word& v = pair.v[c];
    const auto& fs = pair.f.circles[c];
    const auto& gs = pair.g.circles[c];

    auto observed = [&](bool by_f, std::size_t idx) {
      GroupRingElement sum;
      for (const auto& p : points) {
        if (p.circle == c && (by_f ? p.f_interval : p.g_interval) == idx) sum.add_term(p.class_word, p.index);
      }
      return sum;
    };

    const Letter first = v[0];
    if (!first.inverted) {
      for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        const LabeledInterval& I = fs[fi];
        if (!I.label || I.hi > half) continue;
        GroupRingElement predicted =
            -left_multiply(u.prefix(I.letter_index), fox_derivative(first.generator, Word{*I.label}));
        checks.push_back({RegionCheck::Kind::top_half, c, fi, std::move(predicted), observed(true, fi)});
      }
    }

    const Letter last = u[u.size() - 1];
    if (!last.inverted) {
      const Word head = u.prefix(u.size() - 1);
      for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        const LabeledInterval& J = gs[gi];
        if (J.lo < half) continue;
        if (gi + 1 == gs.size()) {
          checks.push_back({RegionCheck::Kind::last_interval, c, gi, GroupRingElement{}, observed(false, gi)});
          continue;
        }
        GroupRingElement predicted = left_multiply(
            head, involution(left_multiply(v.prefix(J.letter_index),
                                           fox_derivative(last.generator, Word{*J.label}))));
        checks.push_back({RegionCheck::Kind::bottom_half, c, gi, std::move(predicted), observed(false, gi)});
      }
    }
  }
  return checks;
}

std::string format_intervals(const Alphabet& alphabet, const RegularPair& pair) {
  std::ostringstream out;
  auto dump = [&](const char* map, const std::vector<LabeledInterval>& intervals) {
    for (const auto& I : intervals) {
      out << alphabet.name(I.circle) << ' ' << map << ' ' << format_rational(I.lo) << ' '
          << format_rational(I.hi) << ' ' << (I.label ? format_word(alphabet, Word{*I.label}) : "1") << '\n';
    }
  };
  for (std::size_t c = 0; c < pair.f.circles.size(); ++c) {
    dump("f", pair.f.circles[c]);
    dump("g", pair.g.circles[c]);
  }
  return out.str();
}

}  // namespace reidtrace
