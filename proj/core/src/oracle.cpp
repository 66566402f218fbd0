#include "dmlat/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "dmlat/parallel.hpp"

namespace dmlat {

namespace {

template <typename Fn>
void for_each_bit(std::span<const uint64_t> w, Fn&& fn) {
  for (size_t wi = 0; wi < w.size(); ++wi) {
    uint64_t x = w[wi];
    while (x) {
      fn(static_cast<uint32_t>(wi * 64 + std::countr_zero(x)));
      x &= x - 1;
    }
  }
}

bool span_subset(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

uint64_t isqrt_u64(uint64_t q) {
  uint64_t o = static_cast<uint64_t>(std::sqrt(static_cast<double>(q)));
  while (o > 0 && o * o > q) --o;
  while ((o + 1) * (o + 1) <= q) ++o;
  return o;
}

uint64_t lcm_u64(uint64_t a, uint64_t b) { return a / std::gcd(a, b) * b; }

}  // namespace

// ---------------------------------------------------------------------------
// ExplicitGroup

ExplicitGroup::ExplicitGroup(std::vector<uint32_t> moduli, const OracleLimits& limits)
    : moduli_(std::move(moduli)) {
  uint64_t order = 1;
  for (uint32_t m : moduli_) {
    if (m < 2) throw std::invalid_argument("ExplicitGroup: modulus must be >= 2");
    auto f = factor_u64(m);
    if (f.size() != 1) {
      throw std::invalid_argument("ExplicitGroup: modulus " + std::to_string(m) +
                                  " is not a prime power");
    }
    order *= m;
    if (order > limits.order_cap) {
      throw oracle_scale_error("oracle scale exceeded: group order > cap " +
                               std::to_string(limits.order_cap));
    }
  }
  if (order > 65535) {
    throw oracle_scale_error("oracle scale exceeded: group order " + std::to_string(order) +
                             " above the 65535-element representation ceiling");
  }
  n_ = static_cast<uint32_t>(order);

  const size_t r = moduli_.size();
  coords_.resize(static_cast<size_t>(n_) * r);
  for (uint32_t i = 0; i < n_; ++i) {
    uint32_t t = i;
    for (size_t j = 0; j < r; ++j) {
      coords_[static_cast<size_t>(i) * r + j] = static_cast<uint16_t>(t % moduli_[j]);
      t /= moduli_[j];
    }
  }

  if (static_cast<uint64_t>(n_) * n_ <= (1u << 24)) {  // 32 MB of uint16 at most
    add_.resize(static_cast<size_t>(n_) * n_);
    for (uint32_t a = 0; a < n_; ++a) {
      for (uint32_t b = 0; b < n_; ++b) {
        add_[static_cast<size_t>(a) * n_ + b] = static_cast<uint16_t>(add_slow(a, b));
      }
    }
  }

  elt_order_.resize(n_);
  for (uint32_t x = 0; x < n_; ++x) {
    uint64_t o = 1;
    for (size_t j = 0; j < r; ++j) {
      uint32_t c = coords_[static_cast<size_t>(x) * r + j];
      o = lcm_u64(o, moduli_[j] / std::gcd<uint64_t>(moduli_[j], c));
    }
    elt_order_[x] = static_cast<uint32_t>(o);
  }

  for (uint32_t m : moduli_) {
    uint64_t p = factor_u64(m)[0].first;
    if (primes_.empty() || std::find(primes_.begin(), primes_.end(), p) == primes_.end()) {
      primes_.push_back(p);
    }
  }
  std::sort(primes_.begin(), primes_.end());

  for (uint64_t p : primes_) {
    uint32_t max_e = 0;
    for (uint32_t m : moduli_) {
      auto f = factor_u64(m);
      if (f[0].first == p) max_e = std::max(max_e, f[0].second);
    }
    for (uint32_t j = 1; j <= max_e + 1; ++j) {
      uint64_t k = 1;
      for (uint32_t t = 0; t < j; ++t) k *= p;
      std::vector<uint32_t> tab(n_);
      for (uint32_t x = 0; x < n_; ++x) tab[x] = scalar_mul(k, x);
      ppow_mul_.emplace(std::make_pair(p, j), std::move(tab));
    }
  }
}

uint32_t ExplicitGroup::add_slow(uint32_t a, uint32_t b) const {
  const size_t r = moduli_.size();
  uint32_t idx = 0, stride = 1;
  for (size_t j = 0; j < r; ++j) {
    uint32_t c = coords_[static_cast<size_t>(a) * r + j] + coords_[static_cast<size_t>(b) * r + j];
    if (c >= moduli_[j]) c -= moduli_[j];
    idx += c * stride;
    stride *= moduli_[j];
  }
  return idx;
}

uint32_t ExplicitGroup::scalar_mul(uint64_t k, uint32_t x) const {
  const size_t r = moduli_.size();
  uint32_t idx = 0, stride = 1;
  for (size_t j = 0; j < r; ++j) {
    uint64_t c = (k % moduli_[j]) * coords_[static_cast<size_t>(x) * r + j] % moduli_[j];
    idx += static_cast<uint32_t>(c) * stride;
    stride *= moduli_[j];
  }
  return idx;
}

const std::vector<uint32_t>& ExplicitGroup::prime_power_mul(uint64_t p, uint32_t j) const {
  auto it = ppow_mul_.find({p, j});
  if (it == ppow_mul_.end()) {
    throw std::invalid_argument("prime_power_mul: no table for p=" + std::to_string(p) +
                                " j=" + std::to_string(j));
  }
  return it->second;
}

Bitset ExplicitGroup::cyclic_subgroup(uint32_t x) const {
  Bitset s(n_);
  uint32_t y = x;
  s.set(0);
  while (y != 0) {
    s.set(y);
    y = add(y, x);
  }
  return s;
}

ExplicitGroup build_group(const GroupType& t, const OracleLimits& limits) {
  Count order = t.order();
  if (order > limits.order_cap) {
    throw oracle_scale_error("oracle scale exceeded: |G| = " + order.str() + " > cap " +
                             std::to_string(limits.order_cap));
  }
  std::vector<uint32_t> moduli;
  for (const auto& c : t.components()) {
    for (uint32_t e : c.exponents()) {
      moduli.push_back(static_cast<uint32_t>(pow_count(c.prime(), e).convert_to<uint64_t>()));
    }
  }
  return ExplicitGroup(std::move(moduli), limits);
}

// ---------------------------------------------------------------------------
// SubgroupLattice

namespace {

// S + <x>: union of the translates of S by the powers of x.
void close_with_cyclic(const ExplicitGroup& g, const Bitset& s, uint32_t x, Bitset& out) {
  out = s;
  uint32_t y = x;
  while (y != 0) {
    s.for_each([&](uint32_t e) { out.set(g.add(e, y)); });
    y = g.add(y, x);
  }
}

}  // namespace

SubgroupLattice SubgroupLattice::enumerate(ExplicitGroup group, const OracleLimits& limits) {
  const ExplicitGroup& g = group;
  const uint32_t n = g.size();

  // |L(G)| >= |L(socle)|, and the socle subgroup count has a closed form; use
  // it to refuse hopeless inputs before spending minutes enumerating.
  {
    Count socle = 1;
    for (uint64_t p : g.primes()) {
      uint32_t rank = 0;
      for (uint32_t m : g.moduli()) {
        if (m % p == 0) ++rank;
      }
      socle *= subgroup_lattice_size_elementary(rank, p);
    }
    if (socle > limits.max_subgroups) {
      throw oracle_scale_error("oracle scale exceeded: at least " + socle.str() +
                               " subgroups (socle bound) > max_subgroups " +
                               std::to_string(limits.max_subgroups));
    }
  }

  std::vector<std::pair<Bitset, uint32_t>> cyclics;  // subgroup, generator
  {
    std::unordered_set<Bitset, BitsetHash> seen;
    for (uint32_t x = 0; x < n; ++x) {
      Bitset c = g.cyclic_subgroup(x);
      if (seen.insert(c).second) cyclics.emplace_back(std::move(c), x);
    }
  }

  std::unordered_set<Bitset, BitsetHash> all;
  std::vector<Bitset> frontier;
  for (auto& [c, x] : cyclics) {
    if (all.insert(c).second) frontier.push_back(c);
  }

  Bitset scratch(n);
  while (!frontier.empty()) {
    std::vector<Bitset> next;
    for (const Bitset& s : frontier) {
      for (const auto& [c, x] : cyclics) {
        if (s.test(x)) continue;  // <x> already inside, join is s itself
        close_with_cyclic(g, s, x, scratch);
        if (!all.contains(scratch)) {
          all.insert(scratch);
          next.push_back(scratch);
          if (all.size() > limits.max_subgroups) {
            throw oracle_scale_error("oracle scale exceeded: more than " +
                                     std::to_string(limits.max_subgroups) + " subgroups");
          }
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<Bitset> subs(all.begin(), all.end());
  return SubgroupLattice(std::move(group), std::move(subs));
}

SubgroupLattice::SubgroupLattice(ExplicitGroup g, std::vector<Bitset> subs) : g_(std::move(g)) {
  std::sort(subs.begin(), subs.end(), [](const Bitset& a, const Bitset& b) {
    uint32_t ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    auto wa = a.data(), wb = b.data();
    return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
  });

  words_ = (g_.size() + 63) / 64;
  arena_.resize(words_ * subs.size());
  orders_.resize(subs.size());
  index_.reserve(subs.size() * 2);
  for (uint32_t i = 0; i < subs.size(); ++i) {
    auto w = subs[i].data();
    std::copy(w.begin(), w.end(), arena_.begin() + static_cast<size_t>(i) * words_);
    orders_[i] = subs[i].count();
    index_.emplace(std::move(subs[i]), i);
  }
  for (uint32_t i = 0; i < orders_.size(); ++i) {
    auto [it, fresh] = order_ranges_.try_emplace(orders_[i], std::make_pair(i, i + 1));
    if (!fresh) it->second.second = i + 1;
  }
  if (size() <= kTableLimit) build_tables();
}

bool SubgroupLattice::leq(uint32_t a, uint32_t b) const {
  return span_subset(members(a), members(b));
}

uint32_t SubgroupLattice::index_of_members(std::span<const uint64_t> w) const {
  Bitset b(g_.size());
  std::copy(w.begin(), w.end(), b.data().begin());
  auto it = index_.find(b);
  if (it == index_.end()) throw std::logic_error("index_of_members: not a subgroup");
  return it->second;
}

uint32_t SubgroupLattice::meet(uint32_t a, uint32_t b) const {
  if (has_tables()) return meet_tab_[static_cast<size_t>(a) * size() + b];
  Bitset m(g_.size());
  auto wa = members(a), wb = members(b);
  for (size_t i = 0; i < words_; ++i) m.data()[i] = wa[i] & wb[i];
  auto it = index_.find(m);
  if (it == index_.end()) throw std::logic_error("meet: intersection is not a subgroup");
  return it->second;
}

uint32_t SubgroupLattice::join(uint32_t a, uint32_t b) const {
  if (has_tables()) return join_tab_[static_cast<size_t>(a) * size() + b];
  Bitset u(g_.size());
  auto wa = members(a), wb = members(b);
  for (size_t i = 0; i < words_; ++i) u.data()[i] = wa[i] | wb[i];
  auto it = index_.find(u);
  if (it != index_.end()) return it->second;
  // Close the union: fold in generators of b that are still missing.
  Bitset span(g_.size()), tmp(g_.size());
  std::copy(wa.begin(), wa.end(), span.data().begin());
  for (;;) {
    uint32_t missing = UINT32_MAX;
    for_each_bit(u.data(), [&](uint32_t x) {
      if (missing == UINT32_MAX && !span.test(x)) missing = x;
    });
    if (missing == UINT32_MAX) break;
    close_with_cyclic(g_, span, missing, tmp);
    std::swap(span, tmp);
  }
  auto it2 = index_.find(span);
  if (it2 == index_.end()) throw std::logic_error("join: closure is not an enumerated subgroup");
  return it2->second;
}

std::pair<uint32_t, uint32_t> SubgroupLattice::order_range(uint32_t order) const {
  auto it = order_ranges_.find(order);
  if (it == order_ranges_.end()) return {0, 0};
  return it->second;
}

void SubgroupLattice::build_tables() {
  const uint32_t n = size();
  // Up/down sets as bitmasks over subgroup indices make both tables cheap:
  // the join of a and b is the lowest common element of up(a) & up(b) in the
  // (order-sorted) index order, the meet the highest of down(a) & down(b).
  const size_t tw = (n + 63) / 64;
  std::vector<uint64_t> up(static_cast<size_t>(n) * tw, 0), down(static_cast<size_t>(n) * tw, 0);
  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = 0; b < n; ++b) {
      if (span_subset(members(a), members(b))) {
        up[static_cast<size_t>(a) * tw + b / 64] |= uint64_t(1) << (b % 64);
        down[static_cast<size_t>(b) * tw + a / 64] |= uint64_t(1) << (a % 64);
      }
    }
  }
  meet_tab_.assign(static_cast<size_t>(n) * n, 0);
  join_tab_.assign(static_cast<size_t>(n) * n, 0);
  for (uint32_t a = 0; a < n; ++a) {
    const uint64_t* ua = &up[static_cast<size_t>(a) * tw];
    const uint64_t* da = &down[static_cast<size_t>(a) * tw];
    for (uint32_t b = 0; b < n; ++b) {
      const uint64_t* ub = &up[static_cast<size_t>(b) * tw];
      const uint64_t* db = &down[static_cast<size_t>(b) * tw];
      uint32_t j = UINT32_MAX;
      for (size_t w = 0; w < tw; ++w) {
        if (uint64_t x = ua[w] & ub[w]; x) {
          j = static_cast<uint32_t>(w * 64 + std::countr_zero(x));
          break;
        }
      }
      uint32_t m = UINT32_MAX;
      for (size_t w = tw; w-- > 0;) {
        if (uint64_t x = da[w] & db[w]; x) {
          m = static_cast<uint32_t>(w * 64 + 63 - std::countl_zero(x));
          break;
        }
      }
      join_tab_[static_cast<size_t>(a) * n + b] = j;
      meet_tab_[static_cast<size_t>(a) * n + b] = m;
    }
  }
}

// ---------------------------------------------------------------------------
// isomorphism typing

namespace {

// Torsion-layer profile: with t_j = #{x in K : p^j x in H}, the conjugate
// partition entry (#parts >= j) is log_p(t_j / t_{j-1}).
std::vector<uint32_t> p_layer_partition(const ExplicitGroup& g, std::span<const uint64_t> k,
                                        std::span<const uint64_t> h, uint64_t p, uint32_t max_e) {
  std::vector<uint32_t> parts_ge;
  uint64_t t_prev = 0;
  for_each_bit(k, [&](uint32_t x) {
    if ((h[x >> 6] >> (x & 63)) & 1) ++t_prev;
  });
  for (uint32_t j = 1; j <= max_e; ++j) {
    const auto& mul = g.prime_power_mul(p, j);
    uint64_t t = 0;
    for_each_bit(k, [&](uint32_t x) {
      uint32_t y = mul[x];
      if ((h[y >> 6] >> (y & 63)) & 1) ++t;
    });
    uint32_t e = 0;
    uint64_t q = t / t_prev;
    while (q > 1) {
      q /= p;
      ++e;
    }
    if (e == 0) break;
    parts_ge.push_back(e);
    t_prev = t;
  }
  if (parts_ge.empty()) return {};
  std::vector<uint32_t> alphas;
  for (uint32_t i = 1; i <= parts_ge[0]; ++i) {
    uint32_t c = 0;
    for (uint32_t e : parts_ge) c += (e >= i);
    alphas.push_back(c);
  }
  return alphas;  // conjugate of the layer profile = exponent partition
}

GroupType type_of_section(const ExplicitGroup& g, std::span<const uint64_t> k,
                          std::span<const uint64_t> h) {
  std::vector<PPartition> comps;
  for (uint64_t p : g.primes()) {
    uint32_t max_e = 0;
    for (uint32_t m : g.moduli()) {
      if (m % p) continue;
      uint32_t e = 0;
      uint64_t mm = m;
      while (mm > 1) {
        mm /= p;
        ++e;
      }
      max_e = std::max(max_e, e);
    }
    auto alphas = p_layer_partition(g, k, h, p, max_e);
    if (!alphas.empty()) comps.emplace_back(p, std::move(alphas));
  }
  return GroupType(std::move(comps));
}

}  // namespace

GroupType subgroup_type(const ExplicitGroup& g, const Bitset& s) {
  Bitset triv(g.size());
  triv.set(0);
  return type_of_section(g, s.data(), triv.data());
}

GroupType subgroup_type(const SubgroupLattice& lat, uint32_t i) {
  return type_of_section(lat.group(), lat.members(i), lat.members(lat.trivial_index()));
}

GroupType quotient_type(const ExplicitGroup& g, const Bitset& h, const Bitset& k) {
  if (!h.subset_of(k)) throw std::invalid_argument("quotient_type: H is not contained in K");
  return type_of_section(g, k.data(), h.data());
}

GroupType quotient_type(const SubgroupLattice& lat, uint32_t h, uint32_t k) {
  if (!lat.leq(h, k)) throw std::invalid_argument("quotient_type: H is not contained in K");
  return type_of_section(lat.group(), lat.members(k), lat.members(h));
}

// ---------------------------------------------------------------------------
// section census and friends

Count SectionCensus::total() const {
  Count t = 0;
  for (const auto& [k, v] : counts) t += v;
  return t;
}

Count SectionCensus::at(const GroupType& t) const {
  auto it = counts.find(t);
  return it == counts.end() ? Count(0) : it->second;
}

SectionCensus section_census(const SubgroupLattice& lat) {
  const uint32_t n = lat.size();
  std::map<GroupType, Count> counts;
  counts[GroupType{}] = n;  // the H = K pairs
  std::mutex mu;
  parallel_for(n, [&](uint64_t kj) {
    const uint32_t k = static_cast<uint32_t>(kj);
    auto mk = lat.members(k);
    std::map<GroupType, uint64_t> local;
    for (uint32_t h = 0; h < k; ++h) {
      if (lat.order(k) % lat.order(h)) continue;
      if (lat.order(h) == lat.order(k)) continue;
      if (!span_subset(lat.members(h), mk)) continue;
      local[type_of_section(lat.group(), mk, lat.members(h))] += 1;
    }
    if (local.empty()) return;
    std::lock_guard<std::mutex> lk(mu);
    for (auto& [t, c] : local) counts[t] += c;
  });
  return SectionCensus{std::move(counts)};
}

SubgroupTypeCensus subgroup_type_census(const SubgroupLattice& lat) {
  SubgroupTypeCensus out;
  const uint32_t full = lat.full_index();
  for (uint32_t i = 0; i < lat.size(); ++i) {
    out.by_type[subgroup_type(lat, i)][quotient_type(lat, i, full)] += 1;
  }
  return out;
}

Count SubgroupTypeCensus::count_of_type(const GroupType& t) const {
  auto it = by_type.find(t);
  if (it == by_type.end()) return 0;
  Count c = 0;
  for (const auto& [q, k] : it->second) c += k;
  return c;
}

std::vector<uint64_t> overgroup_counts(const SubgroupLattice& lat) {
  const uint32_t n = lat.size();
  std::vector<uint64_t> counts(n, 0);
  parallel_for(n, [&](uint64_t hi) {
    const uint32_t h = static_cast<uint32_t>(hi);
    auto mh = lat.members(h);
    uint64_t c = 0;
    for (uint32_t k = h; k < n; ++k) {
      if (lat.order(k) % lat.order(h)) continue;
      if (k != h && lat.order(k) == lat.order(h)) continue;
      if (span_subset(mh, lat.members(k))) ++c;
    }
    counts[h] = c;
  });
  return counts;
}

// ---------------------------------------------------------------------------
// diamond counting

namespace {

struct BucketScratch {
  std::vector<uint32_t> up;      // indices of subgroups containing M
  std::vector<uint32_t> mids;    // middle candidates of the current bucket
  std::vector<uint64_t> adj;     // mids x mids adjacency bits
};

void check_work(std::atomic<uint64_t>& work, uint64_t add, const OracleLimits& limits) {
  uint64_t total = work.fetch_add(add, std::memory_order_relaxed) + add;
  if (static_cast<double>(total) > limits.max_count_work) {
    throw oracle_scale_error(
        "oracle scale exceeded: diamond counting needs more than " +
        std::to_string(static_cast<uint64_t>(limits.max_count_work)) +
        " word operations (budget max_count_work)");
  }
}

// Counts the triangles of the pair-graph of bucket (M, J): vertices are the
// order-sqrt(|M||J|) subgroups between M and J, edges the pairs meeting
// exactly in M. Joins need no closure: X v Y has order |X||Y|/|X ^ Y| and
// lies inside J, so meet == M forces the join to be J itself.
template <typename OnTri>
uint64_t bucket_triangles(const SubgroupLattice& lat, uint32_t mi,
                          std::span<const uint32_t> mid_candidates, std::span<const uint64_t> mj,
                          BucketScratch& s, const OracleLimits& limits,
                          std::atomic<uint64_t>& work, const OnTri* on_tri) {
  const size_t W = lat.words();
  auto mm = lat.members(mi);

  s.mids.clear();
  for (uint32_t x : mid_candidates) {
    if (span_subset(lat.members(x), mj)) s.mids.push_back(x);
  }
  const size_t V = s.mids.size();
  if (V < 3) return 0;

  const size_t aw = (V + 63) / 64;
  const uint64_t adj_bytes = static_cast<uint64_t>(V) * aw * 8;
  if (adj_bytes > limits.max_adjacency_bytes) {
    throw oracle_scale_error("oracle scale exceeded: bucket with " + std::to_string(V) +
                             " middle subgroups needs " + std::to_string(adj_bytes) +
                             " adjacency bytes (max_adjacency_bytes)");
  }
  check_work(work, V * V / 2 * W, limits);

  s.adj.assign(V * aw, 0);
  uint64_t edges = 0;
  for (size_t a = 0; a + 1 < V; ++a) {
    auto wa = lat.members(s.mids[a]);
    for (size_t b = a + 1; b < V; ++b) {
      auto wb = lat.members(s.mids[b]);
      bool eq = true;
      for (size_t w = 0; w < W; ++w) {
        if ((wa[w] & wb[w]) != mm[w]) {
          eq = false;
          break;
        }
      }
      if (eq) {
        s.adj[a * aw + b / 64] |= uint64_t(1) << (b % 64);
        s.adj[b * aw + a / 64] |= uint64_t(1) << (a % 64);
        ++edges;
      }
    }
  }
  if (edges < 3) return 0;
  check_work(work, edges * aw, limits);

  uint64_t tri = 0;
  for (size_t a = 0; a < V; ++a) {
    const uint64_t* ra = &s.adj[a * aw];
    for (size_t wi = (a + 1) / 64; wi < aw; ++wi) {
      uint64_t x = ra[wi];
      if (wi == (a + 1) / 64 && (a + 1) % 64) x &= ~uint64_t(0) << ((a + 1) % 64);
      while (x) {
        size_t b = wi * 64 + std::countr_zero(x);
        x &= x - 1;
        const uint64_t* rb = &s.adj[b * aw];
        size_t w0 = (b + 1) / 64;
        uint64_t first_mask = ((b + 1) % 64) ? (~uint64_t(0) << ((b + 1) % 64)) : ~uint64_t(0);
        for (size_t w = w0; w < aw; ++w) {
          uint64_t common = ra[w] & rb[w];
          if (w == w0) common &= first_mask;
          if (!common) continue;
          tri += std::popcount(common);
          if (on_tri) {
            uint64_t cc = common;
            while (cc) {
              size_t c = w * 64 + std::countr_zero(cc);
              cc &= cc - 1;
              (*on_tri)(s.mids[a], s.mids[b], s.mids[c]);
            }
          }
        }
      }
    }
  }
  return tri;
}

using TriCallback = std::function<void(uint32_t, uint32_t, uint32_t)>;

Count count_diamonds_impl(const SubgroupLattice& lat, const OracleLimits& limits) {
  const uint32_t n = lat.size();
  const size_t W = lat.words();
  std::atomic<uint64_t> work{0};
  // The containment scan below touches every (M, X) pair once.
  check_work(work, static_cast<uint64_t>(n) * n / 2 * W, limits);

  // Fail fast on the top bucket: its middle layer is a whole order slice.
  {
    uint64_t q = static_cast<uint64_t>(lat.order(lat.trivial_index())) * lat.order(lat.full_index());
    uint64_t o = isqrt_u64(q);
    if (o * o == q) {
      auto [b, e] = lat.order_range(static_cast<uint32_t>(o));
      uint64_t v = e - b;
      if (v * ((v + 63) / 64) * 8 > limits.max_adjacency_bytes) {
        throw oracle_scale_error("oracle scale exceeded: top bucket has " + std::to_string(v) +
                                 " middle subgroups (max_adjacency_bytes)");
      }
    }
  }

  Count total = 0;
  std::mutex mu;
  parallel_for(n, [&](uint64_t mi_) {
    const uint32_t mi = static_cast<uint32_t>(mi_);
    thread_local BucketScratch scratch;
    auto mm = lat.members(mi);
    const uint32_t mo = lat.order(mi);

    scratch.up.clear();
    auto [mb, me] = lat.order_range(mo);
    (void)mb;
    for (uint32_t x = me; x < n; ++x) {
      if (lat.order(x) % mo) continue;
      if (span_subset(mm, lat.members(x))) scratch.up.push_back(x);
    }
    if (scratch.up.size() < 4) return;  // need at least 3 middles and a top

    uint64_t local = 0;
    for (uint32_t j : scratch.up) {
      const uint64_t q = static_cast<uint64_t>(mo) * lat.order(j);
      const uint64_t o = isqrt_u64(q);
      if (o * o != q) continue;
      // middle candidates: members of up(M) of order o (up is index-sorted,
      // hence order-sorted; find the o-slice by binary search)
      auto lo = std::lower_bound(scratch.up.begin(), scratch.up.end(), o,
                                 [&](uint32_t idx, uint64_t val) { return lat.order(idx) < val; });
      auto hi = std::upper_bound(lo, scratch.up.end(), o, [&](uint64_t val, uint32_t idx) {
        return val < lat.order(idx);
      });
      if (hi - lo < 3) continue;
      local += bucket_triangles<TriCallback>(lat, mi, {&*lo, static_cast<size_t>(hi - lo)},
                                             lat.members(j), scratch, limits, work, nullptr);
    }
    if (local) {
      std::lock_guard<std::mutex> lk(mu);
      total += local;
    }
  });
  return total;
}

}  // namespace

Count count_diamonds(const SubgroupLattice& lat, const OracleLimits& limits) {
  return count_diamonds_impl(lat, limits);
}

Count count_primary_diamonds(const SubgroupLattice& lat, const OracleLimits& limits) {
  return count_primary_diamonds(lat, limits, nullptr);
}

Count count_primary_diamonds(const SubgroupLattice& lat, const OracleLimits& limits,
                             const std::function<void(uint32_t, uint32_t, uint32_t)>& on_triangle) {
  const uint64_t q = lat.order(lat.full_index());
  const uint64_t o = isqrt_u64(q);
  if (o * o != q) return 0;  // middles of a primary diamond share order sqrt(|G|)
  auto [b, e] = lat.order_range(static_cast<uint32_t>(o));
  if (e - b < 3) return 0;
  std::vector<uint32_t> cands(e - b);
  std::iota(cands.begin(), cands.end(), b);
  BucketScratch scratch;
  std::atomic<uint64_t> work{0};
  const TriCallback* cb = on_triangle ? &on_triangle : nullptr;
  return bucket_triangles(lat, lat.trivial_index(), cands, lat.members(lat.full_index()), scratch,
                          limits, work, cb);
}

// ---------------------------------------------------------------------------
// brute-force automorphism counting

Count brute_force_aut_order(const ExplicitGroup& g) {
  const uint32_t n = g.size();
  if (n > 64) {
    throw oracle_scale_error("brute_force_aut_order: |G| = " + std::to_string(n) + " > 64");
  }
  const auto& moduli = g.moduli();
  const size_t r = moduli.size();
  if (r == 0) return 1;

  // Standard basis e_i and, per generator, the candidate images (elements
  // killed by m_i) plus the "proper coset order" witnesses m_i / q.
  std::vector<uint32_t> basis(r);
  uint32_t stride = 1;
  for (size_t i = 0; i < r; ++i) {
    basis[i] = stride;
    stride *= moduli[i];
  }
  std::vector<std::vector<uint32_t>> cands(r);
  std::vector<std::vector<uint64_t>> cofactors(r);
  for (size_t i = 0; i < r; ++i) {
    for (uint32_t y = 0; y < n; ++y) {
      if (g.scalar_mul(moduli[i], y) == 0) cands[i].push_back(y);
    }
    for (auto [p, e] : factor_u64(moduli[i])) cofactors[i].push_back(moduli[i] / p);
  }

  auto translate_span = [&](uint64_t span, uint32_t y) {
    // span + <y> over the <=64-element group, span as an element bitmask
    uint64_t res = span;
    uint32_t z = y;
    while (z != 0) {
      uint64_t s = span;
      while (s) {
        uint32_t e = std::countr_zero(s);
        s &= s - 1;
        res |= uint64_t(1) << g.add(e, z);
      }
      z = g.add(z, y);
    }
    return res;
  };
  auto coset_order_ok = [&](uint64_t span, size_t i, uint32_t y) {
    // y must have order exactly m_i modulo span
    for (uint64_t c : cofactors[i]) {
      if ((span >> g.scalar_mul(c, y)) & 1) return false;
    }
    return true;
  };

  std::atomic<uint64_t> total{0};
  auto rec = [&](auto&& self, size_t i, uint64_t span) -> uint64_t {
    if (i == r - 1) {
      uint64_t c = 0;
      for (uint32_t y : cands[i]) {
        if (coset_order_ok(span, i, y)) ++c;
      }
      return c;
    }
    uint64_t c = 0;
    for (uint32_t y : cands[i]) {
      if (!coset_order_ok(span, i, y)) continue;
      c += self(self, i + 1, translate_span(span, y));
    }
    return c;
  };

  if (r == 1) return rec(rec, 0, 1);
  parallel_for(cands[0].size(), [&](uint64_t ci) {
    uint32_t y = cands[0][static_cast<uint32_t>(ci)];
    if (!coset_order_ok(1, 0, y)) return;
    total.fetch_add(rec(rec, 1, translate_span(1, y)), std::memory_order_relaxed);
  });
  return Count(total.load());
}

// ---------------------------------------------------------------------------

void dump_lattice(std::ostream& os, const SubgroupLattice& lat) {
  for (uint32_t i = 0; i < lat.size(); ++i) {
    os << lat.order(i) << ":";
    for_each_bit(lat.members(i), [&](uint32_t e) { os << " " << e; });
    os << " : " << to_string(subgroup_type(lat, i)) << "\n";
  }
}

}  // namespace dmlat
