#ifndef DMLAT_ARITH_HPP
#define DMLAT_ARITH_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dmlat {

/// Exact nonnegative counter used for every counting result (dm, |L|, |Aut|, n_S).
/// These values grow superexponentially with rank, so fixed-width arithmetic is
/// never used on counting paths.
using Count = boost::multiprecision::cpp_int;

/// Quotient a/b, throwing std::logic_error if b does not divide a exactly.
/// All divisions in the closed-form counting formulas are exact by theory;
/// a nonzero remainder means a formula was transcribed wrong.
Count exact_div(const Count& a, const Count& b);

/// base^exp as a Count (base need not be prime).
Count pow_count(uint64_t base, uint64_t exp);

/// Deterministic primality test, exact for all 64-bit inputs.
bool is_prime_u64(uint64_t n);

/// Prime factorization of n >= 1 as (prime, multiplicity), primes ascending.
/// Uses trial division plus Pollard rho, so arbitrary 64-bit inputs are fine.
std::vector<std::pair<uint64_t, uint32_t>> factor_u64(uint64_t n);

/// All partitions of n (n >= 0), each returned with parts sorted nondecreasing.
/// The list itself is ordered lexicographically on the nonincreasing spelling,
/// i.e. (1,1,...,1) first and (n) last.
std::vector<std::vector<uint32_t>> partitions_of(uint32_t n);

}  // namespace dmlat

#endif
