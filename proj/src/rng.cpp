#include "tilq/rng.hpp"

#include <cmath>

namespace tilq {

namespace {
// Philox 4x32 round constants (Salmon, Moraes, Dror, Shaw; SC 2011).
constexpr std::uint32_t kW32A = 0x9E3779B9u;
constexpr std::uint32_t kW32B = 0xBB67AE85u;
constexpr std::uint32_t kM4x32A = 0xD2511F53u;
constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter_hi,
                                        std::uint64_t counter_lo) {
  std::uint32_t c0 = static_cast<std::uint32_t>(counter_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(counter_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(counter_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(counter_hi >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kM4x32A, c0, lo0, hi0);
    mul_hi_lo(kM4x32B, c2, lo1, hi1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kW32A;
    k1 += kW32B;
  }
  return {c0, c1, c2, c3};
}

double uniform_from_words(std::uint32_t w0, std::uint32_t w1) {
  const std::uint64_t x = (static_cast<std::uint64_t>(w0) << 32) | w1;
  // 53 significant bits, shifted off zero so logs stay finite
  return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto b = philox4x32(seed, stream, index);
  return uniform_from_words(b[0], b[1]);
}

double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto b = philox4x32(seed, stream, index);
  const double u1 = uniform_from_words(b[0], b[1]);
  const double u2 = uniform_from_words(b[2], b[3]);
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace tilq
