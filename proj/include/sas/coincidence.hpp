#ifndef SAS_COINCIDENCE_HPP
#define SAS_COINCIDENCE_HPP

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "sas/montecarlo.hpp"

namespace sas {

// Pair counts versus inter-channel pulse delay. counts[d + max_delay] is the
// number of (S at pulse i, aS at pulse i + d) pairs, d in [-max_delay, max_delay].
struct CoincidenceHistogram {
  int max_delay = 0;
  std::vector<std::uint64_t> counts;  // size 2 * max_delay + 1
  std::uint64_t n_pulses = 0;
  double accumulation_time_s = 0.0;   // n_pulses / rep_rate
  std::uint64_t total_s = 0;
  std::uint64_t total_as = 0;

  std::uint64_t at(int delay) const { return counts[static_cast<std::size_t>(delay + max_delay)]; }
  // Mean count over the 2*max_delay off-zero bins.
  double baseline_count() const;
};

// Streaming histogram builder. Records must arrive in stream order (sorted by
// pulse, S before aS within a pulse); chunk boundaries may fall anywhere.
// Each new record is paired against the retained records at most max_delay
// pulses behind it, so every (S, aS) pair is counted exactly once and memory
// stays O(max_delay).
class HistogramAccumulator {
 public:
  explicit HistogramAccumulator(int max_delay);

  void add(const EventRecord& record);
  void add_chunk(std::span<const EventRecord> records);
  CoincidenceHistogram finish(std::uint64_t n_pulses, double rep_rate_hz) const;

 private:
  int max_delay_;
  std::vector<std::uint64_t> counts_;
  std::deque<std::uint64_t> recent_s_;   // pulse indices within max_delay of the frontier
  std::deque<std::uint64_t> recent_as_;
  std::uint64_t total_s_ = 0;
  std::uint64_t total_as_ = 0;
  std::uint64_t last_pulse_ = 0;
  bool any_ = false;
};

// Single-pass histogram of a whole stream.
CoincidenceHistogram histogram(const EventStream& stream, int max_delay);

// Correlated-rate extraction: the zero-delay rate minus the mean rate over
// all nonzero delays, with the conservative sum-of-square-roots uncertainty.
struct CorrelatedRateResult {
  double rate_zero_cps = 0.0;
  double baseline_cps = 0.0;
  double corr_rate_cps = 0.0;     // rate_zero - baseline
  double uncertainty_cps = 0.0;   // (sqrt(N0) + sqrt(mean off-zero N)) / T
  double g2_zero = 0.0;           // N0 / mean off-zero N; NaN when baseline is empty
};

// Throws data_error when every off-zero bin is empty while the zero bin is
// not (the baseline is undefined, the delay window is degenerate).
CorrelatedRateResult extract_correlated_rate(const CoincidenceHistogram& h);

// counts[d] / baseline_count for every delay. Requires a nonzero baseline.
std::vector<std::pair<int, double>> g2_curve(const CoincidenceHistogram& h);

}  // namespace sas

#endif
