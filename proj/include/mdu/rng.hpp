#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mdu {

using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Derives an independent stream seed from a base seed plus stream tags
/// (start index, cell key, replication, ...). Order-sensitive by design.
inline std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = detail::splitmix64(seed);
  for (std::uint64_t t : tags) s = detail::splitmix64(s ^ t);
  return s;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(mix_seed(seed, tags));
}

// Hand-rolled draws instead of std::*_distribution: the standard leaves those
// implementation-defined, and seeded runs should replay identically anywhere.

/// Uniform on [0, 1), 53-bit resolution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Marsaglia polar method; one spare value cached per generator call pair is
/// intentionally not kept, so draw counts stay position-independent.
inline double standard_normal(Rng& rng) {
  for (;;) {
    double u = 2.0 * uniform01(rng) - 1.0;
    double v = 2.0 * uniform01(rng) - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace mdu
