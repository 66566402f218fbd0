#include "dmlat/abelian.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dmlat {

PPartition::PPartition(uint64_t p, std::vector<uint32_t> exponents)
    : p_(p), exps_(std::move(exponents)) {
  if (!is_prime_u64(p_)) {
    throw std::invalid_argument("PPartition: base " + std::to_string(p_) + " is not prime");
  }
  if (exps_.empty()) throw std::invalid_argument("PPartition: empty exponent list");
  for (uint32_t e : exps_) {
    if (e == 0) throw std::invalid_argument("PPartition: zero exponent");
  }
  std::sort(exps_.begin(), exps_.end());
}

uint32_t PPartition::degree() const {
  uint32_t s = 0;
  for (uint32_t e : exps_) s += e;
  return s;
}

bool PPartition::elementary() const {
  return std::all_of(exps_.begin(), exps_.end(), [](uint32_t e) { return e == 1; });
}

PPartition PPartition::doubled() const {
  std::vector<uint32_t> d;
  d.reserve(exps_.size() * 2);
  for (uint32_t e : exps_) {
    d.push_back(e);
    d.push_back(e);
  }
  return PPartition(p_, std::move(d));
}

std::strong_ordering operator<=>(const PPartition& a, const PPartition& b) {
  if (auto c = a.p_ <=> b.p_; c != 0) return c;
  return a.exps_ <=> b.exps_;
}

GroupType::GroupType(std::vector<PPartition> components) : comps_(std::move(components)) {
  std::sort(comps_.begin(), comps_.end(),
            [](const PPartition& a, const PPartition& b) { return a.prime() < b.prime(); });
  for (size_t i = 1; i < comps_.size(); ++i) {
    if (comps_[i].prime() == comps_[i - 1].prime()) {
      throw std::invalid_argument("GroupType: duplicate prime " + std::to_string(comps_[i].prime()));
    }
  }
}

const PPartition* GroupType::component(uint64_t p) const {
  for (const auto& c : comps_) {
    if (c.prime() == p) return &c;
  }
  return nullptr;
}

Count GroupType::order() const {
  Count r = 1;
  for (const auto& c : comps_) r *= c.order();
  return r;
}

bool GroupType::cyclic() const {
  return std::all_of(comps_.begin(), comps_.end(),
                     [](const PPartition& c) { return c.cyclic(); });
}

std::strong_ordering operator<=>(const GroupType& a, const GroupType& b) {
  return a.comps_ <=> b.comps_;
}

GroupType canonicalize(const std::vector<std::pair<uint64_t, uint32_t>>& factors) {
  std::map<uint64_t, std::vector<uint32_t>> per_prime;
  for (auto [p, e] : factors) {
    if (!is_prime_u64(p)) {
      throw std::invalid_argument("canonicalize: base " + std::to_string(p) + " is not prime");
    }
    if (e == 0) continue;
    per_prime[p].push_back(e);
  }
  std::vector<PPartition> comps;
  comps.reserve(per_prime.size());
  for (auto& [p, exps] : per_prime) comps.emplace_back(p, std::move(exps));
  return GroupType(std::move(comps));
}

Count group_order(const GroupType& t) { return t.order(); }

Count aut_order(const PPartition& t) {
  const uint64_t p = t.prime();
  const auto& a = t.exponents();  // nondecreasing, 1-based formulas below
  const uint32_t n = t.rank();
  // d_r = max{s : alpha_s = alpha_r},  b_r = min{s : alpha_s = alpha_r}
  std::vector<uint32_t> dmax(n), bmin(n);
  for (uint32_t r = 0; r < n; ++r) {
    uint32_t lo = r, hi = r;
    while (lo > 0 && a[lo - 1] == a[r]) --lo;
    while (hi + 1 < n && a[hi + 1] == a[r]) ++hi;
    bmin[r] = lo + 1;
    dmax[r] = hi + 1;
  }
  Count res = 1;
  for (uint32_t i = 1; i <= n; ++i) {
    res *= pow_count(p, dmax[i - 1]) - pow_count(p, i - 1);
  }
  uint64_t e2 = 0, e3 = 0;
  for (uint32_t u = 1; u <= n; ++u) e2 += static_cast<uint64_t>(a[u - 1]) * (n - dmax[u - 1]);
  for (uint32_t v = 1; v <= n; ++v) e3 += static_cast<uint64_t>(a[v - 1] - 1) * (n - bmin[v - 1] + 1);
  res *= pow_count(p, e2);
  res *= pow_count(p, e3);
  return res;
}

Count aut_order(const GroupType& t) {
  Count r = 1;
  for (const auto& c : t.components()) r *= aut_order(c);
  return r;
}

Count aut_order_elementary(uint32_t n, uint64_t p) {
  Count r = pow_count(p, static_cast<uint64_t>(n) * (n - 1) / 2);
  for (uint32_t i = 1; i <= n; ++i) r *= pow_count(p, i) - 1;
  return r;
}

Count gaussian_subgroup_count(uint32_t n, uint32_t i, uint64_t p) {
  if (i > n) {
    throw std::invalid_argument("gaussian_subgroup_count: index " + std::to_string(i) +
                                " out of range for rank " + std::to_string(n));
  }
  if (i > n - i) i = n - i;
  // Multiply numerator factors and divide stepwise; each prefix of a Gaussian
  // binomial product is itself an integer, so the division never truncates.
  Count r = 1;
  for (uint32_t k = 0; k < i; ++k) {
    r *= pow_count(p, n - k) - 1;
    r = exact_div(r, pow_count(p, k + 1) - 1);
  }
  return r;
}

Count subgroup_lattice_size_elementary(uint32_t n, uint64_t p) {
  Count r = 0;
  for (uint32_t j = 0; j <= n; ++j) r += gaussian_subgroup_count(n, j, p);
  return r;
}

Count f_p(uint32_t x1, uint32_t x2, uint64_t p) {
  if (x1 > x2) {
    throw std::invalid_argument("f_p: requires x1 <= x2, got (" + std::to_string(x1) + "," +
                                std::to_string(x2) + ")");
  }
  const Count P = p;
  const Count d = static_cast<int64_t>(x2) - static_cast<int64_t>(x1);
  const Count s = static_cast<uint64_t>(x1) + static_cast<uint64_t>(x2);
  return (d + 1) * pow_count(p, x1 + 2) - (d - 1) * pow_count(p, x1 + 1) - (s + 3) * P + (s + 1);
}

Count subgroup_lattice_size_rank2(uint32_t a1, uint32_t a2, uint64_t p) {
  const Count pm1 = Count(p) - 1;
  return exact_div(f_p(a1, a2, p), pm1 * pm1);
}

std::string to_string(const PPartition& t) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < t.exponents().size(); ++i) {
    if (i) os << ",";
    os << t.exponents()[i];
  }
  os << ")";
  return os.str();
}

std::string to_string(const GroupType& t) {
  if (t.trivial()) return "Z1";
  std::ostringstream os;
  bool first = true;
  for (const auto& c : t.components()) {
    const auto& e = c.exponents();
    for (size_t i = 0; i < e.size();) {
      size_t j = i;
      while (j < e.size() && e[j] == e[i]) ++j;
      if (!first) os << " x ";
      first = false;
      os << "Z" << pow_count(c.prime(), e[i]).str();
      if (j - i > 1) os << "^" << (j - i);
      i = j;
    }
  }
  return os.str();
}

}  // namespace dmlat
