#include "reidtrace/finite_quotient.hpp"

#include <map>
#include <mutex>
#include <tuple>
#include <numeric>
#include <stdexcept>

namespace reidtrace {

namespace {

using Perm = std::vector<std::uint8_t>;

Perm compose(const Perm& p, const Perm& q) {  // p then q
  Perm out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = q[p[i]];
  return out;
}

Perm affine(std::uint8_t modulus, std::uint8_t mul, std::uint8_t add) {
  Perm p(modulus);
  for (std::uint8_t x = 0; x < modulus; ++x) p[x] = static_cast<std::uint8_t>((mul * x + add) % modulus);
  return p;
}

Perm cycle(std::uint8_t degree, const std::vector<std::uint8_t>& points) {
  Perm p(degree);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) p[points[i]] = points[(i + 1) % points.size()];
  return p;
}

// GL(3,2) on the nonzero vectors of F_2^3, encoded as 1..7 and shifted to 0..6
Perm linear3(std::uint8_t (*map)(std::uint8_t)) {
  Perm p(7);
  for (std::uint8_t v = 1; v <= 7; ++v) p[v - 1] = static_cast<std::uint8_t>(map(v) - 1);
  return p;
}

}  // namespace

FiniteGroup::FiniteGroup(std::string name, const std::vector<Perm>& generators) : name_(std::move(name)) {
  if (generators.empty()) throw std::invalid_argument("finite group needs a generator");
  Perm id(generators.front().size());
  std::iota(id.begin(), id.end(), 0);

  std::vector<Perm> elements{id};
  std::map<Perm, Element> index{{id, 0}};
  for (std::size_t at = 0; at < elements.size(); ++at) {
    for (const Perm& g : generators) {
      Perm next = compose(elements[at], g);
      if (index.emplace(next, static_cast<Element>(elements.size())).second) elements.push_back(std::move(next));
      if (elements.size() > 4096) throw std::invalid_argument("finite group too large");
    }
  }
  const std::size_t n = elements.size();
  table_.resize(n * n);
  inverse_.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const Element z = index.at(compose(elements[x], elements[y]));
      table_[x * n + y] = z;
      if (z == identity_) inverse_[x] = static_cast<Element>(y);
    }
  }
}

FiniteGroup::Element FiniteGroup::evaluate(const std::vector<Element>& images, const Word& w) const {
  Element out = identity_;
  for (Letter x : w) {
    const Element e = images[x.generator];
    out = multiply(out, x.inverted ? inverse_[e] : e);
  }
  return out;
}

const std::vector<FiniteGroup>& standard_finite_groups() {
  static const std::vector<FiniteGroup> groups = [] {
    std::vector<FiniteGroup> out;
    out.emplace_back("S3", std::vector<Perm>{cycle(3, {0, 1, 2}), cycle(3, {0, 1})});
    out.emplace_back("D4", std::vector<Perm>{cycle(4, {0, 1, 2, 3}), cycle(4, {1, 3})});
    out.emplace_back("D5", std::vector<Perm>{affine(5, 1, 1), affine(5, 4, 0)});
    out.emplace_back("A4", std::vector<Perm>{cycle(4, {0, 1, 2}), compose(cycle(4, {0, 1}), cycle(4, {2, 3}))});
    out.emplace_back("AGL(1,5)", std::vector<Perm>{affine(5, 1, 1), affine(5, 2, 0)});
    out.emplace_back("S4", std::vector<Perm>{cycle(4, {0, 1}), cycle(4, {0, 1, 2, 3})});
    out.emplace_back("AGL(1,7)", std::vector<Perm>{affine(7, 1, 1), affine(7, 3, 0)});
    out.emplace_back("A5", std::vector<Perm>{cycle(5, {0, 1, 2, 3, 4}), cycle(5, {0, 1, 2})});
    out.emplace_back("S5", std::vector<Perm>{cycle(5, {0, 1, 2, 3, 4}), cycle(5, {0, 1})});
    out.emplace_back("GL(3,2)", std::vector<Perm>{
                                    linear3([](std::uint8_t v) { return static_cast<std::uint8_t>(v ^ ((v >> 1) & 1)); }),
                                    linear3([](std::uint8_t v) {
                                      return static_cast<std::uint8_t>(((v << 1) | (v >> 2)) & 7);
                                    })});
    return out;
  }();
  return groups;
}

namespace {

using Element = FiniteGroup::Element;

// Union-find over the points of G or G x G.
class Components {
 public:
  explicit Components(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::uint32_t x, std::uint32_t y) { parent_[find(x)] = find(y); }

 private:
  std::vector<std::uint32_t> parent_;
};

// One map per conjugacy orbit of maps F -> G: the k-th image runs over orbit
// representatives of the centralizer of the earlier images.
void enumerate_maps(const FiniteGroup& G, std::size_t rank, const std::vector<Element>& stabilizer,
                    std::vector<Element>& images, std::vector<std::vector<Element>>& out) {
  if (images.size() == rank) {
    out.push_back(images);
    return;
  }
  const std::size_t n = G.order();
  Components orbits(n);
  for (Element s : stabilizer) {
    for (std::size_t x = 0; x < n; ++x) {
      orbits.unite(static_cast<std::uint32_t>(x), G.multiply(G.multiply(G.inverse(s), static_cast<Element>(x)), s));
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (orbits.find(static_cast<std::uint32_t>(x)) != x) continue;
    const auto e = static_cast<Element>(x);
    std::vector<Element> centralizer;
    for (Element s : stabilizer) {
      if (G.multiply(s, e) == G.multiply(e, s)) centralizer.push_back(s);
    }
    images.push_back(e);
    enumerate_maps(G, rank, centralizer, images, out);
    images.pop_back();
  }
}

bool generates(const FiniteGroup& G, const std::vector<Element>& images) {
  std::vector<bool> seen(G.order(), false);
  std::vector<Element> reached{G.identity()};
  seen[G.identity()] = true;
  for (std::size_t at = 0; at < reached.size(); ++at) {
    for (Element x : images) {
      const Element y = G.multiply(reached[at], x);
      if (!seen[y]) {
        seen[y] = true;
        reached.push_back(y);
      }
    }
  }
  return reached.size() == G.order();
}

}  // namespace

FiniteQuotientSearch::FiniteQuotientSearch(const Endomorphism& phi, const Endomorphism& psi,
                                           const std::vector<FiniteGroup>& groups, FiniteSearchBudget budget)
    : budget_(budget), rank_(phi.rank()) {
  require_same_alphabet(phi, psi);
  if (rank_ == 0) return;
  for (const FiniteGroup& G : groups) {
    std::uint64_t count = 1;
    bool too_many = false;
    for (std::size_t k = 0; k < rank_ && !too_many; ++k) {
      count *= G.order();
      too_many = count > budget_.maps;
    }
    if (too_many) continue;

    Candidates c{&G, {}};
    std::vector<Element> everything(G.order()), images;
    std::iota(everything.begin(), everything.end(), Element{0});
    std::vector<std::vector<Element>> maps;
    enumerate_maps(G, rank_, everything, images, maps);
    for (auto& m : maps) {
      Map map{std::move(m), {}, {}, {}};
      for (std::uint32_t k = 0; k < rank_; ++k) {
        map.p.push_back(G.evaluate(map.images, phi.image(k)));
        map.q_inv.push_back(G.inverse(G.evaluate(map.images, psi.image(k))));
      }
      // orbits of g -> p g q^-1 are the components under the generator pairs
      Components orbits(G.order());
      for (std::size_t k = 0; k < rank_; ++k) {
        for (std::size_t g = 0; g < G.order(); ++g) {
          orbits.unite(static_cast<std::uint32_t>(g),
                       G.multiply(G.multiply(map.p[k], static_cast<Element>(g)), map.q_inv[k]));
        }
      }
      for (std::size_t g = 0; g < G.order(); ++g) map.orbit.push_back(orbits.find(static_cast<std::uint32_t>(g)));
      map.onto = generates(G, map.images);
      c.maps.push_back(std::move(map));
    }
    candidates_.push_back(std::move(c));
  }
}

std::vector<std::pair<std::string, std::size_t>> FiniteQuotientSearch::map_counts() const {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const Candidates& c : candidates_) out.emplace_back(c.group->name(), c.maps.size());
  return out;
}

std::optional<FiniteSeparation> FiniteQuotientSearch::separate(const Word& alpha, const Word& beta) const {
  if (rank_ == 0) return std::nullopt;
  std::vector<std::vector<std::pair<Element, Element>>> values;
  for (const Candidates& c : candidates_) {
    const FiniteGroup& G = *c.group;
    auto& v = values.emplace_back();
    for (const Map& m : c.maps) {
      v.emplace_back(G.evaluate(m.images, alpha), G.evaluate(m.images, beta));
      if (m.orbit[v.back().first] != m.orbit[v.back().second]) return FiniteSeparation{G.name(), {m.images}};
    }
  }

  // products of two maps into the same group: first those that separated
  // earlier pairs, then all of them while the work budget lasts
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> earlier;
  {
    std::lock_guard lock(mutex_);
    earlier = winners_;
  }
  std::uint64_t work = 0;
  for (const auto& [ci, i, j] : earlier) {
    if (auto found = separate_pair(ci, i, j, values[ci], work)) return found;
  }
  for (std::size_t ci = 0; ci < candidates_.size(); ++ci) {
    const Candidates& c = candidates_[ci];
    const auto& v = values[ci];
    for (std::size_t i = 0; i < c.maps.size(); ++i) {
      if (v[i].first == v[i].second) continue;
      for (std::size_t j = 0; j < c.maps.size(); ++j) {
        if (j == i || (j < i && v[j].first != v[j].second)) continue;  // each pair once
        if (work > budget_.pair_work) return std::nullopt;
        if (auto found = separate_pair(ci, i, j, v, work)) {
          std::lock_guard lock(mutex_);
          winners_.emplace_back(ci, i, j);
          return found;
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<FiniteSeparation> FiniteQuotientSearch::separate_pair(
    std::size_t ci, std::size_t i, std::size_t j, const std::vector<std::pair<Element, Element>>& values,
    std::uint64_t& work) const {
  const FiniteGroup& G = *candidates_[ci].group;
  const Map& e = candidates_[ci].maps[i];
  const Map& f = candidates_[ci].maps[j];
  const std::size_t n = G.order();
  const auto& [ai, bi] = values[i];
  const auto& [aj, bj] = values[j];
  // search the orbit of (alpha, alpha) in G x G for (beta, beta); the orbit
  // is finite, so forward moves reach all of it
  const std::uint32_t target = static_cast<std::uint32_t>(bi * n + bj);
  std::vector<bool> seen(n * n, false);
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(ai * n + aj)};
  seen[queue.front()] = true;
  for (std::size_t at = 0; at < queue.size(); ++at) {
    if (queue[at] == target) return std::nullopt;
    const auto g = static_cast<Element>(queue[at] / n);
    const auto h = static_cast<Element>(queue[at] % n);
    work += rank_;
    for (std::size_t k = 0; k < rank_; ++k) {
      const Element x = G.multiply(G.multiply(e.p[k], g), e.q_inv[k]);
      const Element y = G.multiply(G.multiply(f.p[k], h), f.q_inv[k]);
      const auto next = static_cast<std::uint32_t>(x * n + y);
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  return FiniteSeparation{G.name() + " x " + G.name(), {e.images, f.images}};
}

std::optional<FiniteSeparation> separate_in_finite_quotient(const Endomorphism& phi, const Endomorphism& psi,
                                                            const Word& alpha, const Word& beta,
                                                            const std::vector<FiniteGroup>& groups,
                                                            const FiniteSearchBudget& budget) {
  return FiniteQuotientSearch(phi, psi, groups, budget).separate(alpha, beta);
}

}  // namespace reidtrace
