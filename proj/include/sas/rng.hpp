#ifndef SAS_RNG_HPP
#define SAS_RNG_HPP

#include <array>
#include <cstdint>

namespace sas {

// Philox 4x64 with 10 rounds (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"), the same parameterization NumPy uses for its Philox bit
// generator. Counter-based: each 256-bit output block is a pure function of
// (counter, key), so any pulse's draws can be computed independently of all
// others. Period 2^256 per key.
//
// Stream derivation used by the simulator, stable across versions:
//   key     = { seed, 0 }
//   counter = { pulse_index, 0, 0, 0 }
//   block   = philox4x64(counter, key)
//   u_pair  = uniform(block[0]), u_s = uniform(block[1]), u_as = uniform(block[2])
// block[3] is unused. uniform(x) = (x >> 11) * 2^-53, in [0, 1).
struct PhiloxBlock {
  std::array<std::uint64_t, 4> v;
};

namespace detail {

inline std::uint64_t mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t* hi) {
  const __uint128_t p = static_cast<__uint128_t>(a) * b;
  *hi = static_cast<std::uint64_t>(p >> 64);
  return static_cast<std::uint64_t>(p);
}

inline void philox_round(std::array<std::uint64_t, 4>& c, std::uint64_t k0,
                         std::uint64_t k1) {
  std::uint64_t hi0, hi1;
  const std::uint64_t lo0 = mulhilo64(0xD2E7470EE14C6C93ULL, c[0], &hi0);
  const std::uint64_t lo1 = mulhilo64(0xCA5A826395121157ULL, c[2], &hi1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace detail

inline PhiloxBlock philox4x64(std::array<std::uint64_t, 4> counter,
                              std::array<std::uint64_t, 2> key) {
  detail::philox_round(counter, key[0], key[1]);
  for (int round = 1; round < 10; ++round) {
    key[0] += 0x9E3779B97F4A7C15ULL;  // Weyl increments, golden-ratio constants
    key[1] += 0xBB67AE8584CAA73BULL;
    detail::philox_round(counter, key[0], key[1]);
  }
  return PhiloxBlock{counter};
}

inline double uniform_from_bits(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

struct PulseDraws {
  double u_pair;
  double u_s;
  double u_as;
};

inline PulseDraws pulse_draws(std::uint64_t seed, std::uint64_t pulse_index) {
  const PhiloxBlock b = philox4x64({pulse_index, 0, 0, 0}, {seed, 0});
  return {uniform_from_bits(b.v[0]), uniform_from_bits(b.v[1]),
          uniform_from_bits(b.v[2])};
}

}  // namespace sas

#endif
