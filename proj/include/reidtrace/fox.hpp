// Fox derivatives and the reversed derivative on a free group.

#ifndef REIDTRACE_FOX_HPP_
#define REIDTRACE_FOX_HPP_

#include <cstdint>

#include "reidtrace/freegroup.hpp"

namespace reidtrace {

/// Fox derivative d/dx_g, the additive map with
///   d(1) = 0,  d(x_j) = [g == j],  d(uv) = d(u) + u d(v).
/// For w = h_1 ... h_n this is sum_k h_1 ... h_{k-1} d(h_k).
/// Unreduced input is accepted; the result depends only on the group
/// element.
GroupRingElement fox_derivative(std::uint32_t generator, const Word& w);

/// Reversed derivative D/Dx_g, the additive map with
///   D(1) = 0,  D(x_j) = [g == j],  D(uv) = D(u) v + D(v).
/// For w = h_n ... h_1 (read left to right) this is
/// sum_k D(h_k) h_{k-1} ... h_1, and D(x_g^-1) = -x_g^-1 (the only value
/// compatible with D(x x^-1) = 0). Equivalently D_x w = x^-1 i(d_x w) w.
GroupRingElement delta_derivative(std::uint32_t generator, const Word& w);

}  // namespace reidtrace

#endif  // REIDTRACE_FOX_HPP_
