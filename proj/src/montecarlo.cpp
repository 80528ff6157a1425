#include "sas/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iterator>
#include <thread>

#include "sas/errors.hpp"
#include "sas/rng.hpp"

namespace sas {

void ChannelProbabilities::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(p_s) || !in_unit(p_as) || !in_unit(p_pair)) {
    throw data_error("channel probabilities must lie in [0,1]");
  }
  if (p_s + p_pair > 1.0 || p_as + p_pair > 1.0) {
    throw data_error("per-channel detection probability p_single + p_pair exceeds 1");
  }
}

std::size_t EventStream::count(Channel ch) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [ch](const EventRecord& r) { return r.channel == ch; }));
}

void EventStream::validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].pulse_index >= n_pulses) {
      throw data_error("event stream: pulse index beyond n_pulses");
    }
    if (i > 0 && !(records[i - 1] < records[i])) {
      throw data_error("event stream: records must be strictly sorted by (pulse, channel)");
    }
  }
}

double window_rate_cps(const MaterialModel& material, const CollectionConfig& collection,
                       double window_lo_cm1, double window_hi_cm1) {
  collection.validate();
  const auto& sp = material.spectrum;
  if (!(window_lo_cm1 < window_hi_cm1)) {
    throw data_error("spectral window: need lo < hi");
  }
  if (sp.size() < 2 || window_lo_cm1 < sp.front().shift_cm1 ||
      window_hi_cm1 > sp.back().shift_cm1) {
    throw data_error("spectral window [" + std::to_string(window_lo_cm1) + ", " +
                     std::to_string(window_hi_cm1) + "] outside spectrum domain");
  }

  auto value_at = [&sp](double x) {
    auto it = std::lower_bound(sp.begin(), sp.end(), x,
                               [](const SpectrumPoint& p, double v) { return p.shift_cm1 < v; });
    if (it == sp.begin()) return it->intensity_cps;
    if (it == sp.end()) return sp.back().intensity_cps;
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double t = (x - a.shift_cm1) / (b.shift_cm1 - a.shift_cm1);
    return a.intensity_cps + t * (b.intensity_cps - a.intensity_cps);
  };

  // Trapezoid over the window, with interpolated edge samples.
  double integral = 0.0;
  double prev_x = window_lo_cm1;
  double prev_y = value_at(window_lo_cm1);
  for (const auto& p : sp) {
    if (p.shift_cm1 <= window_lo_cm1) continue;
    if (p.shift_cm1 >= window_hi_cm1) break;
    integral += 0.5 * (prev_y + p.intensity_cps) * (p.shift_cm1 - prev_x);
    prev_x = p.shift_cm1;
    prev_y = p.intensity_cps;
  }
  integral += 0.5 * (prev_y + value_at(window_hi_cm1)) * (window_hi_cm1 - prev_x);

  return integral / collection.mono_resolution_cm1;
}

ChannelProbabilities derive_probabilities(const LaserConfig& laser,
                                          const MaterialModel& material,
                                          const CollectionConfig& collection,
                                          double window_lo_cm1,
                                          double window_hi_cm1) {
  laser.validate();
  material.validate();
  collection.validate();

  const double rate_s = window_rate_cps(material, collection, window_lo_cm1, window_hi_cm1);
  const double center = 0.5 * (window_lo_cm1 + window_hi_cm1);

  double rate_pair = 0.0;
  if (const PotentialBand* band = material.band_containing(center)) {
    rate_pair = pair_rate(laser, band->v0_ev, delta_k(collection, *band));
  }

  double thermal_ratio = 0.0;
  if (std::fabs(center) > 0.0) {
    const double n_bar = bose_occupation(shift_to_energy(std::fabs(center)),
                                         material.temperature_k);
    thermal_ratio = n_bar / (n_bar + 1.0);
  }

  ChannelProbabilities p;
  p.p_pair = rate_pair * collection.detection_efficiency_s *
             collection.detection_efficiency_as / laser.rep_rate_hz;
  p.p_s = rate_s / laser.rep_rate_hz * collection.detection_efficiency_s;
  p.p_as = rate_s * thermal_ratio / laser.rep_rate_hz * collection.detection_efficiency_as;

  if (p.p_pair > 1.0 || p.p_s > 1.0 || p.p_as > 1.0) {
    throw data_error("derived per-pulse probability exceeds 1; configuration is unphysical");
  }
  p.validate();
  return p;
}

namespace {

constexpr std::uint64_t kBlockPulses = 1u << 20;

void simulate_block(const ChannelProbabilities& p, std::uint64_t seed,
                    std::uint64_t begin, std::uint64_t end,
                    std::vector<EventRecord>& out) {
  for (std::uint64_t pulse = begin; pulse < end; ++pulse) {
    const PulseDraws d = pulse_draws(seed, pulse);
    if (d.u_pair < p.p_pair) {
      out.push_back({pulse, Channel::S});
      out.push_back({pulse, Channel::aS});
    } else {
      if (d.u_s < p.p_s) out.push_back({pulse, Channel::S});
      if (d.u_as < p.p_as) out.push_back({pulse, Channel::aS});
    }
  }
}

}  // namespace

EventStream simulate(const ChannelProbabilities& probabilities, std::uint64_t n_pulses,
                     std::uint64_t seed, double rep_rate_hz, unsigned n_threads) {
  probabilities.validate();
  if (n_pulses < 1) throw data_error("simulate: n_pulses must be at least 1");
  if (!(rep_rate_hz > 0.0)) throw data_error("simulate: rep_rate must be positive");

  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());

  EventStream stream;
  stream.n_pulses = n_pulses;
  stream.rep_rate_hz = rep_rate_hz;
  stream.seed = seed;

  const std::uint64_t n_blocks = (n_pulses + kBlockPulses - 1) / kBlockPulses;
  if (n_threads == 1 || n_blocks == 1) {
    simulate_block(probabilities, seed, 0, n_pulses, stream.records);
    return stream;
  }

  // Blocks are statistically independent by construction (disjoint counter
  // ranges); workers fill per-block buffers that are concatenated in block
  // order, so the result does not depend on scheduling.
  std::vector<std::vector<EventRecord>> block_records(n_blocks);
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const std::uint64_t begin = b * kBlockPulses;
      const std::uint64_t end = std::min(n_pulses, begin + kBlockPulses);
      simulate_block(probabilities, seed, begin, end, block_records[b]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::size_t total = 0;
  for (const auto& b : block_records) total += b.size();
  stream.records.reserve(total);
  for (const auto& b : block_records) {
    stream.records.insert(stream.records.end(), b.begin(), b.end());
  }
  return stream;
}

EventStream merge_streams(const EventStream& a, const EventStream& b) {
  if (a.n_pulses != b.n_pulses || a.rep_rate_hz != b.rep_rate_hz) {
    throw data_error("merge_streams: streams must share n_pulses and rep_rate");
  }
  EventStream merged;
  merged.n_pulses = a.n_pulses;
  merged.rep_rate_hz = a.rep_rate_hz;
  merged.seed = a.seed ^ b.seed;
  merged.records.reserve(a.records.size() + b.records.size());
  std::merge(a.records.begin(), a.records.end(), b.records.begin(), b.records.end(),
             std::back_inserter(merged.records));
  merged.records.erase(std::unique(merged.records.begin(), merged.records.end()),
                       merged.records.end());
  return merged;
}

}  // namespace sas
