#ifndef DMLAT_ORACLE_HPP
#define DMLAT_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dmlat/abelian.hpp"
#include "dmlat/arith.hpp"
#include "dmlat/bitset.hpp"

namespace dmlat {

/// Resource limits for the brute-force oracle. The order cap bounds |G|; the
/// remaining knobs stop lattice enumeration and diamond counting before they
/// exhaust memory or run for hours on high-rank 2-groups, whose subgroup
/// counts grow like Gaussian binomials.
struct OracleLimits {
  uint64_t order_cap = 1024;
  uint64_t max_subgroups = 2'000'000;
  uint64_t max_adjacency_bytes = 1ull << 30;   // per-bucket triangle adjacency
  double max_count_work = 8e11;                // word-op budget per diamond count
};

/// Thrown when a requested oracle computation exceeds its limits; the message
/// names the limit and the measured or estimated size that tripped it.
class oracle_scale_error : public std::runtime_error {
 public:
  explicit oracle_scale_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A concrete finite abelian group: the direct product of cyclic groups of
/// the given prime-power moduli. Elements are mixed-radix tuples indexed
/// 0..(prod m_j - 1); index 0 is the identity. Mixed primes are allowed.
class ExplicitGroup {
 public:
  explicit ExplicitGroup(std::vector<uint32_t> moduli, const OracleLimits& limits = {});

  uint32_t size() const { return n_; }
  const std::vector<uint32_t>& moduli() const { return moduli_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    if (!add_.empty()) return add_[static_cast<size_t>(a) * n_ + b];
    return add_slow(a, b);
  }
  uint32_t scalar_mul(uint64_t k, uint32_t x) const;
  uint32_t element_order(uint32_t x) const { return elt_order_[x]; }

  /// Distinct primes dividing |G|, ascending.
  const std::vector<uint64_t>& primes() const { return primes_; }

  /// Index map x -> p^j * x, precomputed for every prime power p^j <= exponent
  /// of G. Throws if p^j is not among those.
  const std::vector<uint32_t>& prime_power_mul(uint64_t p, uint32_t j) const;

  Bitset cyclic_subgroup(uint32_t x) const;

 private:
  uint32_t add_slow(uint32_t a, uint32_t b) const;

  std::vector<uint32_t> moduli_;
  uint32_t n_ = 1;
  std::vector<uint16_t> coords_;      // n * r, coordinate tuples
  std::vector<uint16_t> add_;         // n * n table when small enough
  std::vector<uint32_t> elt_order_;
  std::vector<uint64_t> primes_;
  std::map<std::pair<uint64_t, uint32_t>, std::vector<uint32_t>> ppow_mul_;
};

/// build_group: realize a GroupType as an ExplicitGroup, factors ordered
/// canonically (primes ascending, exponents ascending within a prime).
/// Throws oracle_scale_error if the order exceeds limits.order_cap.
ExplicitGroup build_group(const GroupType& t, const OracleLimits& limits = {});

/// The full subgroup lattice of an ExplicitGroup. Subgroups are stored as
/// member bitsets in one flat arena, sorted by (order, members); index 0 is
/// the trivial subgroup and index size()-1 the whole group. meet is computed
/// as set intersection; join as the smallest subgroup containing the union.
/// For lattices with at most `kTableLimit` subgroups full meet/join tables
/// are materialized; beyond that both are computed on demand (the tables
/// would need |L|^2 entries, which is unreasonable past a few thousand).
class SubgroupLattice {
 public:
  static constexpr uint32_t kTableLimit = 1024;

  /// Breadth-first closure enumeration: seed with all cyclic subgroups, then
  /// repeatedly join frontier subgroups with cyclic ones until no new
  /// subgroup appears. Throws oracle_scale_error past limits.max_subgroups.
  static SubgroupLattice enumerate(ExplicitGroup group, const OracleLimits& limits = {});

  const ExplicitGroup& group() const { return g_; }
  uint32_t size() const { return static_cast<uint32_t>(orders_.size()); }
  uint32_t order(uint32_t i) const { return orders_[i]; }
  std::span<const uint64_t> members(uint32_t i) const {
    return {arena_.data() + static_cast<size_t>(i) * words_, words_};
  }
  size_t words() const { return words_; }
  bool member_bit(uint32_t i, uint32_t elt) const {
    return (members(i)[elt >> 6] >> (elt & 63)) & 1;
  }

  uint32_t trivial_index() const { return 0; }
  uint32_t full_index() const { return size() - 1; }

  bool leq(uint32_t a, uint32_t b) const;        // containment
  uint32_t meet(uint32_t a, uint32_t b) const;   // intersection
  uint32_t join(uint32_t a, uint32_t b) const;   // generated subgroup
  uint32_t index_of_members(std::span<const uint64_t> w) const;  // throws if absent

  /// [begin, end) of the index range holding subgroups of the given order
  /// (empty range if none).
  std::pair<uint32_t, uint32_t> order_range(uint32_t order) const;

  bool has_tables() const { return !meet_tab_.empty(); }

 private:
  SubgroupLattice(ExplicitGroup g, std::vector<Bitset> subs);
  void build_tables();

  ExplicitGroup g_;
  size_t words_ = 0;
  std::vector<uint64_t> arena_;
  std::vector<uint32_t> orders_;
  std::unordered_map<Bitset, uint32_t, BitsetHash> index_;
  std::map<uint32_t, std::pair<uint32_t, uint32_t>> order_ranges_;
  std::vector<uint32_t> meet_tab_, join_tab_;  // only when size() <= kTableLimit
};

/// Isomorphism type of a subgroup, recovered from its p^k-torsion layer sizes.
GroupType subgroup_type(const ExplicitGroup& g, const Bitset& s);
GroupType subgroup_type(const SubgroupLattice& lat, uint32_t i);

/// Isomorphism type of the section K/H (requires H <= K; the order of a coset
/// xH is the least p^k with p^k x in H). Throws std::invalid_argument if H is
/// not contained in K.
GroupType quotient_type(const ExplicitGroup& g, const Bitset& h, const Bitset& k);
GroupType quotient_type(const SubgroupLattice& lat, uint32_t h, uint32_t k);

/// n_S(G) for every section type S: the number of pairs (H,K), H <= K, with
/// K/H of type S. Includes the trivial type (pairs H = K).
struct SectionCensus {
  std::map<GroupType, Count> counts;
  Count total() const;
  Count at(const GroupType& t) const;  // 0 if absent
};
SectionCensus section_census(const SubgroupLattice& lat);

/// Subgroup counts bucketed by (subgroup type, quotient type of G/T).
struct SubgroupTypeCensus {
  std::map<GroupType, std::map<GroupType, Count>> by_type;
  Count count_of_type(const GroupType& t) const;
};
SubgroupTypeCensus subgroup_type_census(const SubgroupLattice& lat);

/// Number of subgroups containing each subgroup, self included; by the
/// correspondence theorem entry T equals |L(G/T)|.
std::vector<uint64_t> overgroup_counts(const SubgroupLattice& lat);

/// Total number of diamonds (M5 sublattices) in the lattice: unordered
/// triples {A,B,C} of distinct subgroups with pairwise equal meets and
/// pairwise equal joins. Pairs are bucketed by their (meet, join) key and
/// each bucket's pair-graph is scanned for triangles. Counts sublattices,
/// so each diamond is counted exactly once.
Count count_diamonds(const SubgroupLattice& lat, const OracleLimits& limits = {});

/// Diamonds whose common meet is trivial and common join is the whole group.
Count count_primary_diamonds(const SubgroupLattice& lat, const OracleLimits& limits = {});

/// As above, additionally invoking on_triangle(a, b, c) for every primary
/// diamond found (subgroup indices). Intended for small lattices.
Count count_primary_diamonds(
    const SubgroupLattice& lat, const OracleLimits& limits,
    const std::function<void(uint32_t, uint32_t, uint32_t)>& on_triangle);

/// |Aut(G)| counted directly: enumerate candidate images of the canonical
/// generating set, pruning by the exact partial-span sizes an automorphism
/// must produce. Requires |G| <= 64.
Count brute_force_aut_order(const ExplicitGroup& g);

/// Debug dump, one subgroup per line: order, member indices, type.
void dump_lattice(std::ostream& os, const SubgroupLattice& lat);

}  // namespace dmlat

#endif
