#include "linres/rng.hpp"

#include <cmath>

namespace linres {

namespace {

// Philox4x64 round constants (multipliers and Weyl key increments).
constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
  const unsigned __int128 p =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

constexpr double kTwoPow53Inv = 0x1.0p-53;

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(
    const std::array<std::uint64_t, 2>& key,
    const std::array<std::uint64_t, 4>& ctr) {
  std::array<std::uint64_t, 4> x = ctr;
  std::uint64_t k0 = key[0];
  std::uint64_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMul0, x[0], hi0, lo0);
    mul_hi_lo(kMul1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return x;
}

std::uint64_t Philox4x64::next_u64() {
  if (buffered_ == 0) {
    buffer_ = block(key_, counter_);
    buffered_ = 4;
    // 256-bit counter increment; wrap-around is unreachable in practice.
    for (int i = 0; i < 4; ++i) {
      if (++counter_[i] != 0) break;
    }
  }
  return buffer_[4 - buffered_--];
}

double Philox4x64::next_unit() {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double Philox4x64::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_gaussian_ = radius * std::sin(angle);
  has_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role,
                          std::uint64_t index) {
  return Philox4x64::block({master, role}, {index, 0, 0, 0})[0];
}

}  // namespace linres
