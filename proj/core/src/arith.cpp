#include "dmlat/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace dmlat {

Count exact_div(const Count& a, const Count& b) {
  if (b == 0) throw std::logic_error("exact_div: division by zero");
  Count q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0) {
    throw std::logic_error("exact_div: " + a.str() + " not divisible by " + b.str());
  }
  return q;
}

Count pow_count(uint64_t base, uint64_t exp) {
  Count r = 1;
  Count b = base;
  while (exp) {
    if (exp & 1) r *= b;
    exp >>= 1;
    if (exp) b *= b;
  }
  return r;
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Brent-cycle Pollard rho; n must be odd composite and not a prime power of 2.
uint64_t pollard_rho(uint64_t n) {
  if (n % 2 == 0) return 2;
  uint64_t c = 1;
  for (;;) {
    uint64_t x = 2, y = 2, d = 1;
    uint64_t q = 1;
    int steps = 0;
    while (d == 1) {
      x = (mulmod_u64(x, x, n) + c) % n;
      y = (mulmod_u64(y, y, n) + c) % n;
      y = (mulmod_u64(y, y, n) + c) % n;
      uint64_t diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      q = mulmod_u64(q, diff, n);
      if (++steps % 64 == 0) {
        d = gcd_u64(q, n);
        if (d != 1 && d != n) return d;
        if (d == n) break;
      }
    }
    d = gcd_u64(q, n);
    if (d != 1 && d != n) return d;
    ++c;  // rare: retry with a different increment
  }
}

void factor_rec(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is a proven deterministic witness set for all n < 3.3e24.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::pair<uint64_t, uint32_t>> factor_u64(uint64_t n) {
  if (n == 0) throw std::invalid_argument("factor_u64: 0 has no factorization");
  std::vector<uint64_t> primes;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<uint64_t, uint32_t>> out;
  for (uint64_t p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1u);
    }
  }
  return out;
}

namespace {

void gen_partitions(uint32_t n, uint32_t maxpart, std::vector<uint32_t>& cur,
                    std::vector<std::vector<uint32_t>>& out) {
  if (n == 0) {
    std::vector<uint32_t> part(cur.rbegin(), cur.rend());  // nondecreasing
    out.push_back(std::move(part));
    return;
  }
  for (uint32_t k = std::min(n, maxpart); k >= 1; --k) {
    cur.push_back(k);
    gen_partitions(n - k, k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<uint32_t>> partitions_of(uint32_t n) {
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> cur;
  gen_partitions(n, n == 0 ? 1 : n, cur, out);
  std::reverse(out.begin(), out.end());  // (1,...,1) first, (n) last
  return out;
}

}  // namespace dmlat
