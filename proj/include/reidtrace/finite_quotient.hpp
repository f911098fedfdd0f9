// Twisted conjugacy obstructions from homomorphisms onto small finite groups.
//
// For any homomorphism r: F -> G, if alpha = phi(gamma) beta psi(gamma)^-1
// then r(alpha) = p r(beta) q^-1 with (p, q) = (r phi(gamma), r psi(gamma)).
// The pairs (r phi(w), r psi(w)) form the subgroup of G x G generated by the
// images of the generators, so r(alpha) and r(beta) must lie in one orbit of
// that subgroup acting by g -> p g q^-1. No invariance of ker r under phi or
// psi is needed. The same holds for the product of several maps.

#ifndef REIDTRACE_FINITE_QUOTIENT_HPP_
#define REIDTRACE_FINITE_QUOTIENT_HPP_

#include <cstdint>
#include <mutex>
#include <tuple>
#include <optional>
#include <string>
#include <vector>

#include "reidtrace/freegroup.hpp"

namespace reidtrace {

/// A finite group given by its Cayley table.
class FiniteGroup {
 public:
  using Element = std::uint16_t;

  /// Closure of the given permutations of {0, ..., degree - 1}.
  FiniteGroup(std::string name, const std::vector<std::vector<std::uint8_t>>& generators);

  const std::string& name() const noexcept { return name_; }
  std::size_t order() const noexcept { return inverse_.size(); }
  Element identity() const noexcept { return identity_; }
  Element multiply(Element x, Element y) const { return table_[x * order() + y]; }
  Element inverse(Element x) const { return inverse_[x]; }

  /// r(w) for r given by generator images.
  Element evaluate(const std::vector<Element>& images, const Word& w) const;

 private:
  std::string name_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  Element identity_ = 0;
};

/// S3, D4, D5, A4, AGL(1,5), S4, AGL(1,7), A5, S5 and GL(3,2), smallest first.
const std::vector<FiniteGroup>& standard_finite_groups();

struct FiniteSeparation {
  std::string group;
  std::vector<std::vector<FiniteGroup::Element>> images;  // per factor: r(x_1), ..., r(x_n)
};

struct FiniteSearchBudget {
  std::uint64_t maps = 100000;         // groups with more maps F -> G are skipped
  std::uint64_t pair_work = 40000000;   // orbit steps spent on products G x G
};

/// Maps F -> G into the given groups, one per conjugacy orbit, with the
/// orbits of g -> r phi(w) g r psi(w)^-1 precomputed. separate() tries each
/// map, then products of two maps into G x G, for one whose image separates
/// alpha from beta.
class FiniteQuotientSearch {
 public:
  FiniteQuotientSearch(const Endomorphism& phi, const Endomorphism& psi, const std::vector<FiniteGroup>& groups,
                       FiniteSearchBudget budget = {});

  std::optional<FiniteSeparation> separate(const Word& alpha, const Word& beta) const;

  /// (group name, number of maps kept) for each group within budget.
  std::vector<std::pair<std::string, std::size_t>> map_counts() const;

 private:
  struct Map {
    std::vector<FiniteGroup::Element> images;
    std::vector<FiniteGroup::Element> p, q_inv;  // r phi(x_k), r psi(x_k)^-1
    std::vector<std::uint32_t> orbit;            // orbit label of each element
    bool onto = false;
  };
  struct Candidates {
    const FiniteGroup* group;
    std::vector<Map> maps;
  };

  std::optional<FiniteSeparation> separate_pair(
      std::size_t group, std::size_t i, std::size_t j,
      const std::vector<std::pair<FiniteGroup::Element, FiniteGroup::Element>>& values,
      std::uint64_t& work) const;

  FiniteSearchBudget budget_;
  std::size_t rank_;
  std::vector<Candidates> candidates_;
  mutable std::mutex mutex_;
  mutable std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> winners_;  // (group, map, map)
};

std::optional<FiniteSeparation> separate_in_finite_quotient(const Endomorphism& phi, const Endomorphism& psi,
                                                            const Word& alpha, const Word& beta,
                                                            const std::vector<FiniteGroup>& groups,
                                                            const FiniteSearchBudget& budget = {});

}  // namespace reidtrace

#endif  // REIDTRACE_FINITE_QUOTIENT_HPP_
