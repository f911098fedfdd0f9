// Coincidence Reidemeister trace of a pair of selfmaps of a bouquet of
// circles, computed from the induced endomorphisms phi and psi:
//
//   RT = rho( 1 - sum_a [ d_a phi(a) + phi(a) psi(a)^-1 - phi(a) a^-1 i(d_a psi(a)) ] )
//      = rho( 1 - sum_a [ d_a phi(a) - D_a psi(a) + phi(a) psi(a)^-1 ] )
//
// where d is the Fox derivative, D the reversed derivative, i the
// involution of ZG and rho the projection onto Reidemeister classes.

#ifndef REIDTRACE_TRACE_HPP_
#define REIDTRACE_TRACE_HPP_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "reidtrace/conjugacy.hpp"
#include "reidtrace/freegroup.hpp"

namespace reidtrace {

enum class MergeStatus { resolved, partially_resolved };

struct TraceTerm {
  std::int64_t coefficient = 0;
  Word representative;  // shortlex-least word of its merged group

  friend bool operator==(const TraceTerm&, const TraceTerm&) = default;
};

struct ReidemeisterTrace {
  std::vector<TraceTerm> terms;
  MergeStatus status = MergeStatus::resolved;
  /// Pairs of term indices whose classes could not be separated or merged.
  std::vector<std::pair<std::size_t, std::size_t>> unknown_pairs;

  friend bool operator==(const ReidemeisterTrace&, const ReidemeisterTrace&) = default;
};

/// The group ring element inside rho(.) in the Fox-derivative form.
GroupRingElement raw_trace(const Endomorphism& phi, const Endomorphism& psi);
/// The same trace in the reversed-derivative form; rho-equal to raw_trace.
GroupRingElement raw_trace_delta(const Endomorphism& phi, const Endomorphism& psi);
/// 1 - sum_a d_a phi(a), the classical fixed point formula.
GroupRingElement fixed_point_raw(const Endomorphism& phi);

/// Groups the terms of `raw` into Reidemeister classes of (phi, psi) and sums
/// coefficients within each class. Classes whose coefficients cancel are
/// dropped. Terms are ordered by representative (shortlex).
ReidemeisterTrace reduce_trace(const GroupRingElement& raw, const TwistedConjugacy& classes);
ReidemeisterTrace reduce_trace(const GroupRingElement& raw, const Endomorphism& phi,
                               const Endomorphism& psi, const DecisionConfig& config = {});

struct NielsenBound {
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  friend bool operator==(const NielsenBound&, const NielsenBound&) = default;
};

NielsenBound nielsen_bound(const ReidemeisterTrace& trace);

/// Fixed point Reidemeister trace of phi, via the coincidence formula with
/// psi = identity.
ReidemeisterTrace fixed_point_trace(const Endomorphism& phi, const DecisionConfig& config = {});

enum class TraceComparison { match, mismatch, inconclusive };

/// Compares rho(x) and rho(y). Equal group ring elements match outright;
/// otherwise the difference x - y is reduced and must vanish.
TraceComparison compare_traces(const GroupRingElement& x, const GroupRingElement& y,
                               const TwistedConjugacy& classes);

}  // namespace reidtrace

#endif  // REIDTRACE_TRACE_HPP_
