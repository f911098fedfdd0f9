#include "reidtrace/conjugacy.hpp"

#include "reidtrace/finite_quotient.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace reidtrace {

using detail::checked_add;
using detail::checked_mul;
using detail::checked_sub;

// IntMatrix ------------------------------------------------------------------

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) = checked_add(out(i, j), checked_mul(a(i, k), b(k, j)));
      }
    }
  }
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = checked_sub(a(i, j), b(i, j));
  }
  return out;
}

IntVector operator*(const IntMatrix& a, std::span<const std::int64_t> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix shape mismatch");
  IntVector out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] = checked_add(out[i], checked_mul(a(i, j), x[j]));
  }
  return out;
}

std::int64_t determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Bareiss minors can exceed 64 bits even when the determinant does not
  using Big = boost::multiprecision::cpp_int;
  std::vector<Big> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> Big& { return a[i * n + j]; };
  int sign = 1;
  Big prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    }
    prev = at(k, k);
  }
  const Big det = sign * at(n - 1, n - 1);
  if (det > std::numeric_limits<std::int64_t>::max() || det < std::numeric_limits<std::int64_t>::min())
    throw OverflowError("integer overflow in determinant");
  return static_cast<std::int64_t>(det);
}

// Smith normal form ----------------------------------------------------------

namespace {

struct SmithWork {
  IntMatrix a, u, v;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
  }
  // row_i -= q row_j
  void sub_row(std::size_t i, std::size_t j, std::int64_t q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = checked_sub(a(i, c), checked_mul(q, a(j, c)));
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = checked_sub(u(i, c), checked_mul(q, u(j, c)));
  }
  // col_i -= q col_j
  void sub_col(std::size_t i, std::size_t j, std::int64_t q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, i) = checked_sub(a(r, i), checked_mul(q, a(r, j)));
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, i) = checked_sub(v(r, i), checked_mul(q, v(r, j)));
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
  }
};

// Nearest-integer quotient, so remainders satisfy |r| <= |d| / 2; keeps the
// transforms small.
std::int64_t quotient(std::int64_t n, std::int64_t d) {
  std::int64_t q = n / d;
  const std::int64_t r = n - q * d;
  if (2 * std::llabs(r) > std::llabs(d)) q += ((r < 0) == (d < 0)) ? 1 : -1;
  return q;
}

}  // namespace

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  const std::size_t n = std::min(d.rows(), d.cols());
  while (r < n && d(r, r) != 0) ++r;
  return r;
}

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithWork w{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (w.a(i, j) != 0 && (pi == rows || std::llabs(w.a(i, j)) < std::llabs(w.a(pi, pj)))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) break;
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        w.sub_row(i, t, quotient(w.a(i, t), w.a(t, t)));
        dirty |= w.a(i, t) != 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        w.sub_col(j, t, quotient(w.a(t, j), w.a(t, t)));
        dirty |= w.a(t, j) != 0;
      }
      if (dirty) continue;

      // divisibility: pull an offending row into the pivot row and retry
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (w.a(i, j) % w.a(t, t) != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad == rows) break;
      w.sub_row(t, bad, -1);
    }
    if (w.a(t, t) < 0) w.negate_row(t);
  }
  return SmithForm{std::move(w.u), std::move(w.a), std::move(w.v)};
}

std::optional<LatticeSolution> solve_integer_system(const SmithForm& smith,
                                                    std::span<const std::int64_t> rhs) {
  const std::size_t rows = smith.d.rows();
  const std::size_t cols = smith.d.cols();
  if (rhs.size() != rows) throw std::invalid_argument("right-hand side has the wrong length");
  const IntVector c = smith.u * rhs;
  const std::size_t r = smith.rank();
  IntVector y(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (i < r) {
      if (c[i] % smith.diagonal(i) != 0) return std::nullopt;
      y[i] = c[i] / smith.diagonal(i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  LatticeSolution sol;
  sol.particular = smith.v * std::span<const std::int64_t>(y);
  for (std::size_t j = r; j < cols; ++j) sol.kernel.push_back(smith.v.column(j));
  return sol;
}

AbelianizedEndo abelianize_endo(const Endomorphism& e) {
  const std::size_t n = e.rank();
  IntMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    IntVector col = exponent_sums(e.image(j), n);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return {std::move(m)};
}

// Class-2 nilpotent quotient -------------------------------------------------

std::size_t commutator_count(std::size_t rank) { return rank * (rank - (rank ? 1 : 0)) / 2; }

std::size_t commutator_index(std::size_t i, std::size_t j, std::size_t rank) {
  // rows (0,1..n-1), (1,2..n-1), ...
  return i * rank - i * (i + 1) / 2 + (j - i - 1);
}

namespace {

// Q(v, w)_ij = -v_j w_i
void add_collection_term(IntVector& c, const IntVector& v, const IntVector& w) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[j] == 0) continue;
      auto& slot = c[commutator_index(i, j, n)];
      slot = checked_sub(slot, checked_mul(v[j], w[i]));
    }
  }
}

}  // namespace

Nil2Element nil2_identity(std::size_t rank) {
  return {IntVector(rank, 0), IntVector(commutator_count(rank), 0)};
}

Nil2Element nil2_embed(const Word& w, std::size_t rank) {
  Nil2Element x = nil2_identity(rank);
  IntVector step(rank, 0);
  for (Letter l : w) {
    if (l.generator >= rank) throw AlphabetMismatch("letter outside alphabet");
    step[l.generator] = l.sign();
    add_collection_term(x.c, x.v, step);
    x.v[l.generator] += l.sign();
    step[l.generator] = 0;
  }
  return x;
}

Nil2Element nil2_multiply(const Nil2Element& x, const Nil2Element& y) {
  if (x.v.size() != y.v.size() || x.c.size() != y.c.size()) {
    throw AlphabetMismatch("class-2 elements of different rank");
  }
  Nil2Element out = x;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = checked_add(out.v[i], y.v[i]);
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = checked_add(out.c[i], y.c[i]);
  add_collection_term(out.c, x.v, y.v);
  return out;
}

Nil2Element nil2_power(const Nil2Element& x, std::int64_t k) {
  // (v, c)^k = (k v, k c + k(k-1)/2 Q(v, v)), valid for all integers k
  const std::size_t n = x.v.size();
  Nil2Element out = nil2_identity(n);
  for (std::size_t i = 0; i < n; ++i) out.v[i] = checked_mul(k, x.v[i]);
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = checked_mul(k, x.c[i]);
  IntVector q(out.c.size(), 0);
  add_collection_term(q, x.v, x.v);
  const std::int64_t binom = checked_mul(k, k - 1) / 2;
  for (std::size_t i = 0; i < q.size(); ++i) out.c[i] = checked_add(out.c[i], checked_mul(binom, q[i]));
  return out;
}

Nil2Element nil2_inverse(const Nil2Element& x) { return nil2_power(x, -1); }

IntMatrix exterior_square(const IntMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t big = commutator_count(n);
  IntMatrix out(big, big);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t col = commutator_index(i, j, n);
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          out(commutator_index(p, q, n), col) =
              checked_sub(checked_mul(m(p, i), m(q, j)), checked_mul(m(q, i), m(p, j)));
        }
      }
    }
  }
  return out;
}

namespace {

Nil2Element nil2_collected_image(const std::vector<Nil2Element>& images, const IntVector& v,
                                 std::size_t rank) {
  Nil2Element out = nil2_identity(rank);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] != 0) out = nil2_multiply(out, nil2_power(images[k], v[k]));
  }
  return out;
}

std::vector<Nil2Element> nil2_generator_images(const Endomorphism& e) {
  std::vector<Nil2Element> out;
  for (std::size_t k = 0; k < e.rank(); ++k) out.push_back(nil2_embed(e.image(k), e.rank()));
  return out;
}

}  // namespace

Nil2Element nil2_endo(const Endomorphism& e, const Nil2Element& x) {
  const std::size_t n = e.rank();
  if (x.v.size() != n) throw AlphabetMismatch("class-2 element rank differs from endomorphism");
  // x = x_1^v_1 ... x_n^v_n * (central commutator part)
  Nil2Element out = nil2_collected_image(nil2_generator_images(e), x.v, n);
  const IntVector central = exterior_square(abelianize_endo(e).matrix) * std::span<const std::int64_t>(x.c);
  for (std::size_t i = 0; i < central.size(); ++i) out.c[i] = checked_add(out.c[i], central[i]);
  return out;
}

// DecisionOutcome ------------------------------------------------------------

DecisionOutcome DecisionOutcome::equivalent(Word witness) {
  DecisionOutcome d;
  d.verdict = Verdict::equivalent;
  d.witness = std::move(witness);
  return d;
}

DecisionOutcome DecisionOutcome::distinct(int level, std::string detail) {
  DecisionOutcome d;
  d.verdict = Verdict::distinct;
  d.level = level;
  d.detail = std::move(detail);
  return d;
}

DecisionOutcome DecisionOutcome::unknown(std::string detail) {
  DecisionOutcome d;
  d.detail = std::move(detail);
  return d;
}

// TwistedConjugacy -----------------------------------------------------------

struct TwistedConjugacy::Cache {
  std::mutex mutex;
  std::unique_ptr<FiniteQuotientSearch> finite;
  struct PairLess {
    bool operator()(const std::pair<Word, Word>& x, const std::pair<Word, Word>& y) const {
      const ShortlexLess less;
      return less(x.first, y.first) || (x.first == y.first && less(x.second, y.second));
    }
  };
  std::map<std::pair<Word, Word>, DecisionOutcome, PairLess> finite_verdicts;
};

TwistedConjugacy::TwistedConjugacy(Endomorphism phi, Endomorphism psi, DecisionConfig config)
    : phi_(std::move(phi)), psi_(std::move(psi)), config_(config), cache_(std::make_shared<Cache>()) {
  require_same_alphabet(phi_, psi_);
  const IntMatrix phi_ab = abelianize_endo(phi_).matrix;
  const IntMatrix psi_ab = abelianize_endo(psi_).matrix;
  abelian_smith_ = smith_normal_form(phi_ab - psi_ab);
  phi_images_ = nil2_generator_images(phi_);
  psi_images_ = nil2_generator_images(psi_);
  commutator_difference_ = exterior_square(phi_ab) - exterior_square(psi_ab);
  commutator_smith_ = smith_normal_form(commutator_difference_);

  phi_letter_.resize(2 * rank());
  psi_letter_inverse_.resize(2 * rank());
  for (std::uint32_t g = 0; g < rank(); ++g) {
    for (Letter x : {gen(g), inv(g)}) {
      phi_letter_[x.order_key()] = phi_.apply(x);
      psi_letter_inverse_[x.order_key()] = invert(psi_.apply(x));
    }
  }
}

Word TwistedConjugacy::twist(const Word& gamma, const Word& beta) const {
  return reduce(phi_.apply(gamma).concat(beta).concat(invert(psi_.apply(gamma))));
}

bool TwistedConjugacy::verifies(const Word& alpha, const Word& beta, const Word& gamma) const {
  return twist(gamma, beta) == reduce(alpha);
}

IntVector TwistedConjugacy::abelian_key(const Word& w) const {
  IntVector c = abelian_smith_.u * std::span<const std::int64_t>(exponent_sums(w, rank()));
  const std::size_t r = abelian_smith_.rank();
  for (std::size_t i = 0; i < r; ++i) {
    const std::int64_t d = abelian_smith_.diagonal(i);
    c[i] = ((c[i] % d) + d) % d;
  }
  return c;
}

DecisionOutcome TwistedConjugacy::decide_abelian(const Word& alpha, const Word& beta) const {
  if (abelian_key(alpha) != abelian_key(beta)) {
    return DecisionOutcome::distinct(1, "abelianized equation (Phi - Psi) g = ab(alpha) - ab(beta) has no integer solution");
  }
  return DecisionOutcome::unknown("abelianized equation is solvable");
}

Nil2Element TwistedConjugacy::nil2_phi(const IntVector& g) const {
  return nil2_collected_image(phi_images_, g, rank());
}

Nil2Element TwistedConjugacy::nil2_psi(const IntVector& g) const {
  return nil2_collected_image(psi_images_, g, rank());
}

bool TwistedConjugacy::in_commutator_image(const IntVector& r) const {
  const IntVector y = commutator_smith_.u * std::span<const std::int64_t>(r);
  const std::size_t rk = commutator_smith_.rank();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i < rk ? y[i] % commutator_smith_.diagonal(i) != 0 : y[i] != 0) return false;
  }
  return true;
}

DecisionOutcome TwistedConjugacy::decide_nilpotent2(const Word& alpha, const Word& beta) const {
  const std::size_t n = rank();
  const IntVector diff = [&] {
    IntVector a = exponent_sums(alpha, n), b = exponent_sums(beta, n);
    for (std::size_t i = 0; i < n; ++i) a[i] = checked_sub(a[i], b[i]);
    return a;
  }();
  const auto lattice = solve_integer_system(abelian_smith_, diff);
  if (!lattice) return decide_abelian(alpha, beta);
  if (n < 2) return DecisionOutcome::unknown("class-2 quotient of a rank-1 group is abelian");

  // With gamma = (g, h), the commutator part of phi(gamma) beta psi(gamma)^-1
  // is F(g) + M2 h where M2 = L2(Phi) - L2(Psi). Solvable iff
  // target - F(g) lies in Image(M2) for some g in the abelian solution set.
  const Nil2Element target = nil2_embed(alpha, n);
  const Nil2Element beta2 = nil2_embed(beta, n);
  const std::size_t k = lattice->kernel.size();

  auto residual = [&](const IntVector& t) {
    IntVector g = lattice->particular;
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t i = 0; i < n; ++i) g[i] = checked_add(g[i], checked_mul(t[b], lattice->kernel[b][i]));
    }
    const Nil2Element value = nil2_multiply(nil2_multiply(nil2_phi(g), beta2), nil2_inverse(nil2_psi(g)));
    IntVector r = target.c;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_sub(r[i], value.c[i]);
    return r;
  };
  auto describe = [](const IntVector& t) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
    out << ')';
    return out.str();
  };

  if (k == 0) {
    if (in_commutator_image(residual({}))) {
      return DecisionOutcome::unknown("class-2 equation is solvable");
    }
    return DecisionOutcome::distinct(2, "class-2 equation has no solution (unique abelian solution)");
  }

  // Coordinates of U2 * residual beyond rank(M2) must vanish exactly. The
  // residual is an integer quadratic in t, so it is constant iff it takes the
  // same value at 0, +-e_i and e_i + e_j.
  const std::size_t rk = commutator_smith_.rank();
  auto free_part = [&](const IntVector& t) {
    IntVector y = commutator_smith_.u * std::span<const std::int64_t>(residual(t));
    return IntVector(y.begin() + static_cast<std::ptrdiff_t>(rk), y.end());
  };
  const IntVector free0 = free_part(IntVector(k, 0));
  bool free_constant = true;
  for (std::size_t i = 0; i < k && free_constant; ++i) {
    for (std::int64_t s : {1, -1}) {
      IntVector t(k, 0);
      t[i] = s;
      free_constant &= free_part(t) == free0;
    }
    for (std::size_t j = i + 1; j < k && free_constant; ++j) {
      IntVector t(k, 0);
      t[i] = t[j] = 1;
      free_constant &= free_part(t) == free0;
    }
  }

  if (free_constant) {
    if (std::any_of(free0.begin(), free0.end(), [](std::int64_t x) { return x != 0; })) {
      return DecisionOutcome::distinct(2, "class-2 equation fails in the free part of the cokernel");
    }
    // Torsion part: an integer quadratic mod e is periodic with period 2e.
    const std::int64_t e = rk ? commutator_smith_.diagonal(rk - 1) : 1;
    const std::int64_t period = 2 * e;
    std::uint64_t points = 1;
    bool within_budget = true;
    for (std::size_t i = 0; i < k && within_budget; ++i) {
      if (points > config_.periodic_scan_budget / static_cast<std::uint64_t>(period)) within_budget = false;
      points *= static_cast<std::uint64_t>(period);
    }
    if (within_budget) {
      IntVector t(k, 0);
      for (;;) {
        if (in_commutator_image(residual(t))) {
          return DecisionOutcome::unknown("class-2 equation is solvable at t = " + describe(t));
        }
        std::size_t i = 0;
        while (i < k && ++t[i] == period) t[i++] = 0;
        if (i == k) break;
      }
      return DecisionOutcome::distinct(
          2, "class-2 equation has no solution (exhaustive scan over period " + std::to_string(period) + ")");
    }
  }

  // Bounded fallback: a hit shows class-2 solvability, a miss proves nothing.
  const std::int64_t box = config_.fallback_box;
  IntVector t(k, -box);
  for (;;) {
    if (in_commutator_image(residual(t))) {
      return DecisionOutcome::unknown("class-2 equation is solvable at t = " + describe(t));
    }
    std::size_t i = 0;
    while (i < k && ++t[i] > box) t[i++] = -box;
    if (i == k) break;
  }
  return DecisionOutcome::unknown("class-2 check inconclusive (no solution in the fallback box)");
}

namespace {

// reduce(x y z) in one pass and one allocation.
Word reduced_product(const Word& x, const Word& y, const Word& z) {
  std::vector<Letter> out;
  out.reserve(x.size() + y.size() + z.size());
  for (const Word* w : {&x, &y, &z}) {
    for (Letter l : *w) {
      if (!out.empty() && out.back() == l.inverse()) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
  }
  return Word(std::move(out));
}

}  // namespace

void TwistedConjugacy::for_each_twist(
    const Word& beta, std::size_t max_len,
    const std::function<bool(const Word& gamma, const Word& value)>& visit) const {
  struct Node {
    Word gamma;
    Word value;
  };
  std::unordered_set<Word, WordHash> seen;
  std::vector<Node> level{{Word{}, reduce(beta)}};
  seen.insert(level.front().value);
  if (visit(level.front().gamma, level.front().value)) return;

  const std::uint32_t letters = static_cast<std::uint32_t>(2 * rank());
  for (std::size_t len = 1; len <= max_len && !level.empty(); ++len) {
    std::vector<Node> next;
    // x-major over a shortlex-ordered level keeps x*gamma in shortlex order
    for (std::uint32_t key = 0; key < letters; ++key) {
      const Letter x{key / 2, (key % 2) == 1};
      for (const Node& node : level) {
        if (!node.gamma.empty() && node.gamma[0] == x.inverse()) continue;
        Word value = reduced_product(phi_letter_[key], node.value, psi_letter_inverse_[key]);
        if (!seen.insert(value).second) continue;
        std::vector<Letter> g;
        g.reserve(node.gamma.size() + 1);
        g.push_back(x);
        g.insert(g.end(), node.gamma.begin(), node.gamma.end());
        Node child{Word(std::move(g)), std::move(value)};
        if (visit(child.gamma, child.value)) return;
        if (len < max_len) next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
}

std::optional<Word> TwistedConjugacy::find_witness(const Word& alpha, const Word& beta,
                                                   std::size_t max_len) const {
  const Word target = reduce(alpha);
  std::optional<Word> found;
  for_each_twist(beta, max_len, [&](const Word& gamma, const Word& value) {
    if (value == target) {
      found = gamma;
      return true;
    }
    return false;
  });
  return found;
}

DecisionOutcome TwistedConjugacy::decide_finite(const Word& alpha, const Word& beta) const {
  if (config_.finite_homomorphism_budget == 0) return DecisionOutcome::unknown("finite quotients disabled");
  Word x = reduce(alpha), y = reduce(beta);
  if (ShortlexLess{}(y, x)) std::swap(x, y);  // separation is symmetric

  std::lock_guard lock(cache_->mutex);
  if (auto it = cache_->finite_verdicts.find({x, y}); it != cache_->finite_verdicts.end()) return it->second;
  if (!cache_->finite) {
    cache_->finite = std::make_unique<FiniteQuotientSearch>(
        phi_, psi_, standard_finite_groups(),
        FiniteSearchBudget{config_.finite_homomorphism_budget, config_.finite_pair_work});
  }
  const auto found = cache_->finite->separate(x, y);
  DecisionOutcome outcome = DecisionOutcome::unknown("no separating finite quotient");
  if (found) {
    std::ostringstream out;
    out << "images in " << found->group << " lie in different orbits (generator images";
    for (std::size_t f = 0; f < found->images.size(); ++f) {
      out << (f ? ";" : "");
      for (auto e : found->images[f]) out << ' ' << e;
    }
    out << ')';
    outcome = DecisionOutcome::distinct(3, out.str());
  }
  cache_->finite_verdicts.emplace(std::make_pair(std::move(x), std::move(y)), outcome);
  return outcome;
}

DecisionOutcome TwistedConjugacy::decide(const Word& alpha, const Word& beta) const {
  DecisionOutcome outcome = decide_abelian(alpha, beta);
  if (outcome.is_distinct()) return outcome;
  if (config_.nilpotent_level >= 2) {
    outcome = decide_nilpotent2(alpha, beta);
    if (outcome.is_distinct()) return outcome;
  }
  if (auto gamma = find_witness(alpha, beta, config_.max_witness_len)) {
    return DecisionOutcome::equivalent(std::move(*gamma));
  }
  outcome = decide_finite(alpha, beta);
  if (outcome.is_distinct()) return outcome;
  return DecisionOutcome::unknown("no witness of length <= " + std::to_string(config_.max_witness_len) +
                                  " and no quotient obstruction");
}

// Free functions -------------------------------------------------------------

DecisionOutcome decide_abelian(const Word& alpha, const Word& beta, const Endomorphism& phi,
                               const Endomorphism& psi) {
  return TwistedConjugacy(phi, psi).decide_abelian(alpha, beta);
}

DecisionOutcome decide_nilpotent2(const Word& alpha, const Word& beta, const Endomorphism& phi,
                                  const Endomorphism& psi, const DecisionConfig& config) {
  return TwistedConjugacy(phi, psi, config).decide_nilpotent2(alpha, beta);
}

std::optional<Word> find_witness(const Word& alpha, const Word& beta, const Endomorphism& phi,
                                 const Endomorphism& psi, std::size_t max_len) {
  return TwistedConjugacy(phi, psi).find_witness(alpha, beta, max_len);
}

DecisionOutcome decide_finite(const Word& alpha, const Word& beta, const Endomorphism& phi,
                              const Endomorphism& psi, const DecisionConfig& config) {
  return TwistedConjugacy(phi, psi, config).decide_finite(alpha, beta);
}

DecisionOutcome decide(const Word& alpha, const Word& beta, const Endomorphism& phi,
                       const Endomorphism& psi, const DecisionConfig& config) {
  return TwistedConjugacy(phi, psi, config).decide(alpha, beta);
}

}  // namespace reidtrace
