#ifndef DMLAT_BITSET_HPP
#define DMLAT_BITSET_HPP

#include <bit>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dmlat {

/// Fixed-width dynamic bitset; the oracle uses it both for element sets
/// (subgroup members) and for adjacency rows over subgroup indices.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(uint32_t nbits) : bits_(nbits), w_((nbits + 63) / 64, 0) {}

  uint32_t size_bits() const { return bits_; }
  size_t words() const { return w_.size(); }
  std::span<const uint64_t> data() const { return w_; }
  std::span<uint64_t> data() { return w_; }

  void set(uint32_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(uint32_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  bool test(uint32_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  uint32_t count() const {
    uint32_t c = 0;
    for (uint64_t x : w_) c += static_cast<uint32_t>(std::popcount(x));
    return c;
  }

  bool subset_of(const Bitset& o) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      if (w_[i] & ~o.w_[i]) return false;
    }
    return true;
  }

  Bitset& operator|=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  /// Calls fn(i) for every set bit i, ascending.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (size_t wi = 0; wi < w_.size(); ++wi) {
      uint64_t x = w_[wi];
      while (x) {
        fn(static_cast<uint32_t>(wi * 64 + std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

  size_t hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ bits_;
    for (uint64_t x : w_) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<size_t>(h);
  }

 private:
  uint32_t bits_ = 0;
  std::vector<uint64_t> w_;
};

struct BitsetHash {
  size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace dmlat

#endif
