#include "dmlat/formulas.hpp"

#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>

namespace dmlat {

using Rational = boost::multiprecision::cpp_rational;

const char* to_string(DmMethod m) {
  switch (m) {
    case DmMethod::elementary: return "elementary";
    case DmMethod::rank2: return "rank2";
    case DmMethod::master_sum: return "master-sum";
    case DmMethod::oracle: return "oracle";
    case DmMethod::multiprime: return "multiprime-combination";
  }
  return "?";
}

Count primary_diamond_count(const PPartition& s) {
  return exact_div(aut_order(s.doubled()), 6 * aut_order(s));
}

Count dm_elementary(uint32_t n, uint64_t p) {
  if (n < 1) throw std::invalid_argument("dm_elementary: rank must be >= 1");
  Count sum = 0;
  for (uint32_t i = 1; 2 * i <= n; ++i) {
    Count term = pow_count(p, static_cast<uint64_t>(i) * (3 * i - 1) / 2);
    term *= gaussian_subgroup_count(n, 2 * i, p);
    term *= subgroup_lattice_size_elementary(n - 2 * i, p);
    for (uint32_t k = i + 1; k <= 2 * i; ++k) term *= pow_count(p, k) - 1;
    sum += term;
  }
  return exact_div(sum, 6);
}

Count dm_rank2(uint32_t a1, uint32_t a2, uint64_t p) {
  if (a1 < 1 || a1 > a2) {
    throw std::invalid_argument("dm_rank2: requires 1 <= a1 <= a2");
  }
  Count sum = 0;
  for (uint32_t i = 1; i <= a1; ++i) {
    sum += pow_count(p, 3 * static_cast<uint64_t>(i) - 2) * f_p(a1 - i, a2 - i, p);
  }
  Rational r(sum * (Count(p) + 1), 6 * (Count(p) - 1));
  if (denominator(r) != 1) {
    throw std::logic_error("dm_rank2: non-integral result for p=" + std::to_string(p));
  }
  return numerator(r);
}

std::optional<Count> dm_corollary_shortcuts(uint32_t a1, uint32_t a2, uint64_t p) {
  if (a1 == 1) {
    // n * C(p+1, 3)
    Count c = Count(p + 1) * p * (Count(p) - 1);
    return Count(a2) * exact_div(c, 6);
  }
  if (p == 2 && a1 == a2) {
    const uint64_t n = a1;
    Count v = 3 * pow_count(2, 3 * n + 2) - 49 * pow_count(2, n) + 14 * Count(n) + 37;
    return exact_div(v, 49);
  }
  return std::nullopt;
}

namespace {

// A partition is some S doubled exactly when every part has even multiplicity;
// halving the multiplicities recovers S.
std::optional<PPartition> halve_doubled(const PPartition& t) {
  const auto& e = t.exponents();
  std::vector<uint32_t> half;
  for (size_t i = 0; i < e.size();) {
    size_t j = i;
    while (j < e.size() && e[j] == e[i]) ++j;
    size_t mult = j - i;
    if (mult % 2) return std::nullopt;
    for (size_t k = 0; k < mult / 2; ++k) half.push_back(e[i]);
    i = j;
  }
  return PPartition(t.prime(), std::move(half));
}

}  // namespace

Count dm_master_sum(const PPartition& g, const SectionCensus& census) {
  Count total = 0;
  for (const auto& [type, n] : census.counts) {
    if (type.trivial()) continue;
    if (type.components().size() != 1) continue;
    const PPartition& comp = type.components()[0];
    if (comp.prime() != g.prime()) continue;
    auto s = halve_doubled(comp);
    if (!s) continue;
    total += n * primary_diamond_count(*s);
  }
  return total;
}

Count dm_multiprime(const GroupType& t, const std::map<uint64_t, Count>& per_prime_dm,
                    const std::map<uint64_t, Count>& per_prime_lattice) {
  std::vector<uint64_t> primes;
  for (const auto& c : t.components()) primes.push_back(c.prime());
  std::vector<Count> dms, lats;
  for (uint64_t p : primes) {
    auto di = per_prime_dm.find(p);
    auto li = per_prime_lattice.find(p);
    if (di == per_prime_dm.end() || li == per_prime_lattice.end()) {
      throw method_unavailable_error("dm_multiprime: missing component data for prime " +
                                     std::to_string(p));
    }
    dms.push_back(di->second);
    lats.push_back(li->second);
  }
  const size_t k = primes.size();
  if (k == 0) return 0;
  Count total = 0;
  for (uint64_t mask = 1; mask < (uint64_t(1) << k); ++mask) {
    Count term = 1;
    int bits = 0;
    for (size_t i = 0; i < k; ++i) {
      if (mask & (uint64_t(1) << i)) {
        term *= dms[i];
        ++bits;
      } else {
        term *= lats[i];
      }
    }
    if (term == 0) continue;
    for (int b = 1; b < bits; ++b) term *= 6;
    total += term;
  }
  return total;
}

std::optional<Count> lattice_size_closed_form(const PPartition& t) {
  if (t.elementary()) return subgroup_lattice_size_elementary(t.rank(), t.prime());
  if (t.rank() == 1) return Count(t.exponents()[0] + 1);
  if (t.rank() == 2) {
    return subgroup_lattice_size_rank2(t.exponents()[0], t.exponents()[1], t.prime());
  }
  return std::nullopt;
}

namespace {

DmComponent dm_component(const PPartition& c, const DmOptions& options) {
  if (c.elementary()) {
    return {c, dm_elementary(c.rank(), c.prime()),
            subgroup_lattice_size_elementary(c.rank(), c.prime()), DmMethod::elementary};
  }
  if (c.rank() == 1) {
    // cyclic p-groups are M5-free; this is the empty rank-2 sum
    return {c, 0, Count(c.exponents()[0] + 1), DmMethod::rank2};
  }
  if (c.rank() == 2) {
    return {c, dm_rank2(c.exponents()[0], c.exponents()[1], c.prime()),
            subgroup_lattice_size_rank2(c.exponents()[0], c.exponents()[1], c.prime()),
            DmMethod::rank2};
  }
  // rank >= 3, not elementary: master sum over an oracle census
  GroupType single({c});
  Count order = c.order();
  if (order > options.limits.order_cap) {
    throw method_unavailable_error(
        "dm: component " + to_string(single) + " has order " + order.str() +
        " above the oracle cap " + std::to_string(options.limits.order_cap) +
        " and no closed form applies");
  }
  SubgroupLattice lat = SubgroupLattice::enumerate(build_group(single, options.limits),
                                                   options.limits);
  SectionCensus census = section_census(lat);
  return {c, dm_master_sum(c, census), Count(lat.size()), DmMethod::master_sum};
}

DmResult dm_oracle_direct(const GroupType& t, const DmOptions& options) {
  SubgroupLattice lat = SubgroupLattice::enumerate(build_group(t, options.limits), options.limits);
  DmResult res;
  res.value = count_diamonds(lat, options.limits);
  res.method = DmMethod::oracle;
  if (t.components().size() == 1) {
    res.parts.push_back({t.components()[0], res.value, Count(lat.size()), DmMethod::oracle});
  } else {
    for (const auto& c : t.components()) {
      SubgroupLattice part =
          SubgroupLattice::enumerate(build_group(GroupType({c}), options.limits), options.limits);
      res.parts.push_back(
          {c, count_diamonds(part, options.limits), Count(part.size()), DmMethod::oracle});
    }
  }
  return res;
}

}  // namespace

DmResult dm(const GroupType& t, const DmOptions& options) {
  if (t.trivial()) return {0, DmMethod::multiprime, {}};
  if (options.mode == DmOptions::Mode::oracle) return dm_oracle_direct(t, options);

  DmResult res;
  for (const auto& c : t.components()) res.parts.push_back(dm_component(c, options));

  if (res.parts.size() == 1) {
    res.value = res.parts[0].dm;
    res.method = res.parts[0].method;
    return res;
  }
  std::map<uint64_t, Count> dms, lats;
  for (const auto& part : res.parts) {
    dms[part.type.prime()] = part.dm;
    lats[part.type.prime()] = part.lattice_size;
  }
  res.value = dm_multiprime(t, dms, lats);
  res.method = DmMethod::multiprime;
  return res;
}

}  // namespace dmlat
