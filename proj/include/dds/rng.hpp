#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>

namespace dds {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Combines seed components into one sub-stream seed. Used to give every
// (iteration, class, sample) its own independent deterministic stream.
inline std::uint64_t derive_seed(std::uint64_t seed) { return splitmix64(seed); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t part, Rest... rest) {
  return derive_seed(splitmix64(seed ^ splitmix64(part)), rest...);
}

// std::uniform_int_distribution output is implementation-defined; the raw
// mt19937_64 stream is fully specified, so bounded draws are done by hand.
inline std::uint64_t uniform_u64_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) for arbitrary-precision n > 0, by rejection on
// the bit-length of n (acceptance probability > 1/2). Words are consumed
// most-significant first.
inline mpz_class uniform_mpz_below(std::mt19937_64& rng, const mpz_class& n) {
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::size_t nwords = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits % 64);
  mpz_class r;
  while (true) {
    r = 0;
    for (std::size_t k = 0; k < nwords; ++k) {
      std::uint64_t w = rng();
      if (k == 0 && top_bits != 0) w &= (~std::uint64_t{0}) >> (64 - top_bits);
      mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), 64);
      mpz_add_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(w));
    }
    if (r < n) return r;
  }
}

}  // namespace dds
