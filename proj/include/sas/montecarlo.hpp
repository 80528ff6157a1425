#ifndef SAS_MONTECARLO_HPP
#define SAS_MONTECARLO_HPP

#include <compare>
#include <cstdint>
#include <vector>

#include "sas/physics.hpp"

namespace sas {

enum class Channel : std::uint8_t { S = 0, aS = 1 };

// Per-pulse event probabilities. p_pair is the chance of a correlated pair
// (one S and one aS in the same pulse); p_s / p_as are the chances of an
// unpaired detection, sampled only when no pair fired in that pulse.
struct ChannelProbabilities {
  double p_s = 0.0;
  double p_as = 0.0;
  double p_pair = 0.0;

  void validate() const;
};

struct EventRecord {
  std::uint64_t pulse_index = 0;
  Channel channel = Channel::S;

  friend auto operator<=>(const EventRecord&, const EventRecord&) = default;
};

// Time-tagged detections at pulse granularity. Records are sorted by
// (pulse_index, channel) with at most one record per pulse and channel:
// an APD cannot resolve multiple photons inside one pulse at these rates.
struct EventStream {
  std::vector<EventRecord> records;
  std::uint64_t n_pulses = 0;
  double rep_rate_hz = 0.0;
  std::uint64_t seed = 0;

  std::size_t count(Channel ch) const;
  // Throws data_error when sortedness, uniqueness or the pulse range is violated.
  void validate() const;
};

// Count rate collected through a Stokes-side spectral window [lo, hi] cm^-1.
// Spectrum intensities are monochromator-binned count rates, so the window
// rate is the trapezoidal integral over the window divided by the resolution.
double window_rate_cps(const MaterialModel& material, const CollectionConfig& collection,
                       double window_lo_cm1, double window_hi_cm1);

// Per-pulse probabilities for a measurement windowed at [lo, hi] on the
// Stokes side:
//   p_pair = pair_rate(band at window center) * eta_s * eta_as / R_L
//   p_s    = window rate / R_L * eta_s
//   p_as   = window rate * n/(n+1) / R_L * eta_as   (thermal channel)
// Throws data_error when the window leaves the spectrum domain or any
// probability comes out above 1 (unphysical configuration).
ChannelProbabilities derive_probabilities(const LaserConfig& laser,
                                          const MaterialModel& material,
                                          const CollectionConfig& collection,
                                          double window_lo_cm1,
                                          double window_hi_cm1);

// Pulse-by-pulse Monte Carlo. Per pulse, independently: with p_pair emit both
// channels; otherwise emit S with p_s and aS with p_as, independently. Output
// is a pure function of (probabilities, n_pulses, seed): pulses are processed
// in fixed blocks on n_threads workers (0 = hardware concurrency), and every
// pulse's draws come from the counter-based stream in rng.hpp, so the stream
// is byte-identical for any thread or block count.
EventStream simulate(const ChannelProbabilities& probabilities, std::uint64_t n_pulses,
                     std::uint64_t seed, double rep_rate_hz, unsigned n_threads = 0);

// Sorted union of two streams over the same pulse train; duplicate
// (pulse, channel) records collapse to one. Throws data_error on mismatched
// n_pulses or rep_rate. The merged seed is the XOR of the input seeds.
EventStream merge_streams(const EventStream& a, const EventStream& b);

}  // namespace sas

#endif
