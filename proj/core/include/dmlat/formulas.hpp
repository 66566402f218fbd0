#ifndef DMLAT_FORMULAS_HPP
#define DMLAT_FORMULAS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmlat/abelian.hpp"
#include "dmlat/arith.hpp"
#include "dmlat/oracle.hpp"

namespace dmlat {

/// How a dm value was obtained.
enum class DmMethod { elementary, rank2, master_sum, oracle, multiprime };
const char* to_string(DmMethod m);

/// Thrown when no counting method applies within the configured limits; the
/// message names the blocking component and the cap.
class method_unavailable_error : public std::runtime_error {
 public:
  explicit method_unavailable_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Number of primary diamonds of S x S: |Aut(S x S)| / (6 |Aut(S)|), an exact
/// integer. S must be nontrivial (a one-point lattice has no diamond, and the
/// ratio is undefined there) -- PPartition cannot encode a trivial S, so the
/// precondition is structural.
Count primary_diamond_count(const PPartition& s);

/// dm of the elementary abelian group Z_p^n (n >= 1):
///   (1/6) sum_{i=1}^{floor(n/2)} p^{i(3i-1)/2} a_{n,p}(2i) |L(Z_p^{n-2i})|
///         prod_{k=i+1}^{2i} (p^k - 1).
Count dm_elementary(uint32_t n, uint64_t p);

/// dm of Z_{p^a1} x Z_{p^a2}, 1 <= a1 <= a2:
///   (p+1) / (6(p-1)) * sum_{i=1}^{a1} p^{3i-2} f_p(a1-i, a2-i),
/// evaluated in exact rational arithmetic with an integral result.
Count dm_rank2(uint32_t a1, uint32_t a2, uint64_t p);

/// Closed-form shortcuts for special rank-2 shapes:
///   a1 == 1:            n * C(p+1, 3) with n = a2;
///   p == 2, a1 == a2:   (3*2^{3n+2} - 49*2^n + 14n + 37) / 49.
/// Returns nothing when neither shape applies.
std::optional<Count> dm_corollary_shortcuts(uint32_t a1, uint32_t a2, uint64_t p);

/// The master pipeline for a p-group: sum over nontrivial section types S of
///   n_{S x S}(G) * primary_diamond_count(S).
/// The census provides the n values (every census key that is a single-prime
/// type with all even multiplicities is some S x S). The trivial S is
/// excluded: a one-element section hosts no diamond.
Count dm_master_sum(const PPartition& g, const SectionCensus& census);

/// Combination rule across coprime components, generalized to k primes:
///   dm(prod G_i) = sum over nonempty subsets T of 6^{|T|-1}
///                  prod_{i in T} dm(G_i) * prod_{i not in T} |L(G_i)|.
/// Throws method_unavailable_error if a component of t is missing from
/// either map.
Count dm_multiprime(const GroupType& t, const std::map<uint64_t, Count>& per_prime_dm,
                    const std::map<uint64_t, Count>& per_prime_lattice);

struct DmComponent {
  PPartition type;
  Count dm;
  Count lattice_size;
  DmMethod method;
};

struct DmResult {
  Count value;
  DmMethod method;                   // multiprime when several primes combine
  std::vector<DmComponent> parts;    // per-prime breakdown
};

struct DmOptions {
  enum class Mode { automatic, formula, oracle };
  Mode mode = Mode::automatic;
  OracleLimits limits;
};

/// Dispatcher: per prime component picks the cheapest correct method
/// (elementary closed form, rank-2 closed form, master sum over an oracle
/// census within the order cap), then combines components with the
/// multiprime rule. Mode oracle forces a direct lattice count instead.
/// Throws method_unavailable_error when nothing applies within the limits.
DmResult dm(const GroupType& t, const DmOptions& options = {});

/// |L(G)| for a p-group type via closed forms where they exist (rank <= 2 or
/// elementary); empty otherwise.
std::optional<Count> lattice_size_closed_form(const PPartition& t);

}  // namespace dmlat

#endif
