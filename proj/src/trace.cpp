#include "reidtrace/trace.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "reidtrace/fox.hpp"

namespace reidtrace {

GroupRingElement raw_trace(const Endomorphism& phi, const Endomorphism& psi) {
  require_same_alphabet(phi, psi);
  GroupRingElement sum;
  for (std::uint32_t a = 0; a < phi.rank(); ++a) {
    const Word& phi_a = phi.image(a);
    const Word& psi_a = psi.image(a);
    sum += fox_derivative(a, phi_a);
    sum.add_term(phi_a.concat(invert(psi_a)), 1);
    sum -= left_multiply(phi_a.concat(Word{inv(a)}), involution(fox_derivative(a, psi_a)));
  }
  return GroupRingElement::one() - sum;
}

GroupRingElement raw_trace_delta(const Endomorphism& phi, const Endomorphism& psi) {
  require_same_alphabet(phi, psi);
  GroupRingElement sum;
  for (std::uint32_t a = 0; a < phi.rank(); ++a) {
    sum += fox_derivative(a, phi.image(a));
    sum -= delta_derivative(a, psi.image(a));
    sum.add_term(phi.image(a).concat(invert(psi.image(a))), 1);
  }
  return GroupRingElement::one() - sum;
}

GroupRingElement fixed_point_raw(const Endomorphism& phi) {
  GroupRingElement sum;
  for (std::uint32_t a = 0; a < phi.rank(); ++a) sum += fox_derivative(a, phi.image(a));
  return GroupRingElement::one() - sum;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent_[std::max(x, y)] = std::min(x, y);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ReidemeisterTrace reduce_trace(const GroupRingElement& raw, const TwistedConjugacy& classes) {
  std::vector<Word> words;
  std::vector<std::int64_t> coeffs;
  for (const auto& [w, c] : raw.terms()) {
    require_within(classes.phi().alphabet(), w);
    words.push_back(w);
    coeffs.push_back(c);
  }
  const std::size_t n = words.size();

  // separated[i][j]: certified distinct by a quotient
  std::vector<std::vector<bool>> separated(n, std::vector<bool>(n, false));
  std::map<IntVector, std::vector<std::size_t>> buckets;
  std::vector<IntVector> keys;
  for (std::size_t i = 0; i < n; ++i) {
    keys.push_back(classes.abelian_key(words[i]));
    buckets[keys.back()].push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) separated[i][j] = keys[i] != keys[j];
  }

  UnionFind groups(n);
  for (const auto& [key, members] : buckets) {
    if (classes.config().nilpotent_level >= 2) {
      for (std::size_t x = 0; x < members.size(); ++x) {
        for (std::size_t y = x + 1; y < members.size(); ++y) {
          const std::size_t i = members[x], j = members[y];
          if (classes.decide_nilpotent2(words[i], words[j]).is_distinct()) {
            separated[i][j] = separated[j][i] = true;
          }
        }
      }
    }
    for (std::size_t i : members) {
      std::map<Word, std::size_t, ShortlexLess> wanted;
      for (std::size_t j : members) {
        if (groups.find(i) != groups.find(j) && !separated[i][j]) wanted.emplace(words[j], j);
      }
      if (wanted.empty()) continue;
      classes.for_each_twist(words[i], classes.config().max_witness_len,
                             [&](const Word&, const Word& value) {
                               auto it = wanted.find(value);
                               if (it != wanted.end()) {
                                 groups.unite(i, it->second);
                                 wanted.erase(it);
                               }
                               return wanted.empty();
                             });
    }
  }

  struct Group {
    std::int64_t coefficient = 0;
    Word representative;
    std::vector<std::size_t> members;
  };
  std::map<std::size_t, Group> by_root;
  for (std::size_t i = 0; i < n; ++i) {
    Group& g = by_root[groups.find(i)];
    g.coefficient = detail::checked_add(g.coefficient, coeffs[i]);
    if (g.members.empty() || ShortlexLess{}(words[i], g.representative)) g.representative = words[i];
    g.members.push_back(i);
  }
  std::vector<Group> nonzero;
  for (auto& [root, g] : by_root) {
    if (g.coefficient != 0) nonzero.push_back(std::move(g));
  }
  std::sort(nonzero.begin(), nonzero.end(), [](const Group& x, const Group& y) {
    return ShortlexLess{}(x.representative, y.representative);
  });

  ReidemeisterTrace trace;
  for (const Group& g : nonzero) trace.terms.push_back({g.coefficient, g.representative});
  for (std::size_t x = 0; x < nonzero.size(); ++x) {
    for (std::size_t y = x + 1; y < nonzero.size(); ++y) {
      bool apart = false;
      for (std::size_t i : nonzero[x].members) {
        for (std::size_t j : nonzero[y].members) apart = apart || separated[i][j];
      }
      // members of a group are certified equivalent, so representatives suffice
      if (!apart) apart = classes.decide_finite(nonzero[x].representative, nonzero[y].representative).is_distinct();
      if (!apart) trace.unknown_pairs.emplace_back(x, y);
    }
  }
  trace.status = trace.unknown_pairs.empty() ? MergeStatus::resolved : MergeStatus::partially_resolved;
  return trace;
}

ReidemeisterTrace reduce_trace(const GroupRingElement& raw, const Endomorphism& phi,
                               const Endomorphism& psi, const DecisionConfig& config) {
  return reduce_trace(raw, TwistedConjugacy(phi, psi, config));
}

namespace {

// Fewest nonzero blocks over all partitions of `items` into blocks of
// pairwise-compatible terms.
void min_nonzero_blocks(const std::vector<std::size_t>& items, std::size_t next,
                        const std::vector<std::vector<bool>>& compatible,
                        const std::vector<std::int64_t>& coeffs,
                        std::vector<std::vector<std::size_t>>& blocks,
                        std::vector<std::int64_t>& sums, std::int64_t& best) {
  if (next == items.size()) {
    const auto count = std::count_if(sums.begin(), sums.end(), [](std::int64_t s) { return s != 0; });
    best = std::min<std::int64_t>(best, count);
    return;
  }
  const std::size_t item = items[next];
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    bool ok = std::all_of(blocks[b].begin(), blocks[b].end(),
                          [&](std::size_t other) { return compatible[item][other]; });
    if (!ok) continue;
    blocks[b].push_back(item);
    sums[b] += coeffs[item];
    min_nonzero_blocks(items, next + 1, compatible, coeffs, blocks, sums, best);
    sums[b] -= coeffs[item];
    blocks[b].pop_back();
  }
  blocks.push_back({item});
  sums.push_back(coeffs[item]);
  min_nonzero_blocks(items, next + 1, compatible, coeffs, blocks, sums, best);
  sums.pop_back();
  blocks.pop_back();
}

}  // namespace

NielsenBound nielsen_bound(const ReidemeisterTrace& trace) {
  const auto count = static_cast<std::int64_t>(trace.terms.size());
  if (trace.status == MergeStatus::resolved) return {count, count};

  const std::size_t n = trace.terms.size();
  std::vector<std::vector<bool>> compatible(n, std::vector<bool>(n, false));
  std::vector<bool> involved(n, false);
  for (auto [x, y] : trace.unknown_pairs) {
    compatible[x][y] = compatible[y][x] = true;
    involved[x] = involved[y] = true;
  }
  std::vector<std::size_t> items;
  std::vector<std::int64_t> coeffs(n);
  std::int64_t fixed = 0;
  std::int64_t loose_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    coeffs[i] = trace.terms[i].coefficient;
    if (involved[i]) {
      items.push_back(i);
      loose_sum += coeffs[i];
    } else {
      ++fixed;
    }
  }

  std::int64_t lower;
  if (items.size() <= 10) {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::int64_t> sums;
    lower = static_cast<std::int64_t>(items.size());
    min_nonzero_blocks(items, 0, compatible, coeffs, blocks, sums, lower);
  } else {
    // any partition with a nonzero total has a nonzero block
    lower = loose_sum != 0 ? 1 : 0;
  }
  return {fixed + lower, count};
}

ReidemeisterTrace fixed_point_trace(const Endomorphism& phi, const DecisionConfig& config) {
  const Endomorphism id = Endomorphism::identity(phi.alphabet());
  return reduce_trace(raw_trace(phi, id), TwistedConjugacy(phi, id, config));
}

TraceComparison compare_traces(const GroupRingElement& x, const GroupRingElement& y,
                               const TwistedConjugacy& classes) {
  if (x == y) return TraceComparison::match;
  const GroupRingElement difference = x - y;
  // the augmentation is constant on classes, so it must vanish
  if (difference.coefficient_sum() != 0) return TraceComparison::mismatch;
  const ReidemeisterTrace reduced = reduce_trace(difference, classes);
  if (reduced.terms.empty()) return TraceComparison::match;
  if (nielsen_bound(reduced).lower > 0) return TraceComparison::mismatch;
  return TraceComparison::inconclusive;
}

}  // namespace reidtrace
