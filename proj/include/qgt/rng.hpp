#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace qgt {

// Deterministic, platform-independent random source. std::mt19937 would be
// reproducible too, but the std distributions are not pinned by the standard,
// and byte-identical verification reports across toolchains are part of the
// CLI contract. splitmix64 + an explicit Box–Muller transform keep the whole
// stream under our control.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  // Standard real Gaussian via Box–Muller.
  double next_gaussian() {
    double u = next_double();
    while (u == 0.0) u = next_double();
    const double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
  }

  // Complex Gaussian with independent N(0,1) real and imaginary parts.
  std::complex<double> next_complex_gaussian() {
    const double re = next_gaussian();
    return {re, next_gaussian()};
  }

 private:
  std::uint64_t state_;
};

// FNV-1a, used to derive per-suite sub-seeds from a master seed so that
// running suites in any order (or in parallel) never changes their streams.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t subseed(std::uint64_t master, std::string_view name) {
  Rng mix(master ^ fnv1a(name));
  return mix.next_u64();
}

}  // namespace qgt
