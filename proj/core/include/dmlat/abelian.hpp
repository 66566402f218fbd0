#ifndef DMLAT_ABELIAN_HPP
#define DMLAT_ABELIAN_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "dmlat/arith.hpp"

namespace dmlat {

/// Isomorphism type of a finite abelian p-group: a prime p together with the
/// exponent partition alpha_1 <= alpha_2 <= ... <= alpha_n of its cyclic
/// decomposition prod_i Z_{p^alpha_i}.
class PPartition {
 public:
  /// Validates and canonicalizes: p must be prime, exponents nonempty and
  /// all >= 1; they are stored sorted nondecreasing.
  PPartition(uint64_t p, std::vector<uint32_t> exponents);

  uint64_t prime() const { return p_; }
  const std::vector<uint32_t>& exponents() const { return exps_; }
  uint32_t rank() const { return static_cast<uint32_t>(exps_.size()); }
  uint32_t degree() const;  // sum of exponents, so order() == p^degree()
  Count order() const { return pow_count(p_, degree()); }
  bool elementary() const;  // all exponents equal 1
  bool cyclic() const { return exps_.size() == 1; }

  /// Type of S x S: every exponent duplicated.
  PPartition doubled() const;

  friend bool operator==(const PPartition&, const PPartition&) = default;
  friend std::strong_ordering operator<=>(const PPartition& a, const PPartition& b);

 private:
  uint64_t p_;
  std::vector<uint32_t> exps_;
};

/// Isomorphism type of a finite abelian group: its primary decomposition,
/// one PPartition per prime, primes strictly increasing. The empty list is
/// the trivial group.
class GroupType {
 public:
  GroupType() = default;
  explicit GroupType(std::vector<PPartition> components);  // validates + sorts

  bool trivial() const { return comps_.empty(); }
  const std::vector<PPartition>& components() const { return comps_; }
  const PPartition* component(uint64_t p) const;  // nullptr if p absent
  Count order() const;
  bool cyclic() const;  // every component has rank 1 (includes the trivial group)

  friend bool operator==(const GroupType&, const GroupType&) = default;
  friend std::strong_ordering operator<=>(const GroupType& a, const GroupType& b);

 private:
  std::vector<PPartition> comps_;
};

/// Normal form of a list of cyclic factors (prime, exponent), i.e. Z_{p^e}.
/// Exponent-0 factors are dropped, exponents grouped per prime and sorted,
/// primes sorted. Throws std::invalid_argument on a non-prime base.
GroupType canonicalize(const std::vector<std::pair<uint64_t, uint32_t>>& factors);

Count group_order(const GroupType& t);

/// |Aut(G)| for an abelian p-group of the given type (Hillar-Rhea product
/// over the exponent partition).
Count aut_order(const PPartition& t);

/// |Aut(G)| for any finite abelian group: product over coprime components.
Count aut_order(const GroupType& t);

/// |Aut(Z_p^n)| by the elementary abelian special case
/// p^{n(n-1)/2} * prod_{i=1}^{n} (p^i - 1); agrees with aut_order on
/// all-ones partitions and is kept as an independent cross-check.
Count aut_order_elementary(uint32_t n, uint64_t p);

/// Gaussian binomial a_{n,p}(i): the number of subgroups of order p^i in the
/// elementary abelian group of rank n. Requires 0 <= i <= n.
Count gaussian_subgroup_count(uint32_t n, uint32_t i, uint64_t p);

/// |L(Z_p^n)| = sum_{j=0}^{n} a_{n,p}(j).
Count subgroup_lattice_size_elementary(uint32_t n, uint64_t p);

/// The quartic helper f_p(x1, x2); requires 0 <= x1 <= x2.
/// f_p(x1,x2)/(p-1)^2 is the subgroup count of Z_{p^x1} x Z_{p^x2}.
Count f_p(uint32_t x1, uint32_t x2, uint64_t p);

/// |L(Z_{p^a1} x Z_{p^a2})| = f_p(a1,a2)/(p-1)^2, exact. a1 = 0 is allowed
/// and degenerates to the cyclic subgroup count a2 + 1.
Count subgroup_lattice_size_rank2(uint32_t a1, uint32_t a2, uint64_t p);

/// Compact display forms: "(1,2,2)" for partitions, "Z2 x Z4^2" for types.
std::string to_string(const PPartition& t);
std::string to_string(const GroupType& t);

}  // namespace dmlat

#endif
