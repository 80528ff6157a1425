#include "sas/coincidence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sas/errors.hpp"

namespace sas {

double CoincidenceHistogram::baseline_count() const {
  if (max_delay == 0) return 0.0;
  std::uint64_t sum = 0;
  for (int d = -max_delay; d <= max_delay; ++d) {
    if (d != 0) sum += at(d);
  }
  return static_cast<double>(sum) / (2.0 * max_delay);
}

HistogramAccumulator::HistogramAccumulator(int max_delay) : max_delay_(max_delay) {
  if (max_delay < 1) throw data_error("coincidence max_delay must be >= 1");
  counts_.assign(static_cast<std::size_t>(2 * max_delay + 1), 0);
}

void HistogramAccumulator::add(const EventRecord& record) {
  if (any_ && record.pulse_index < last_pulse_)
    throw data_error("event records must be sorted by pulse index");
  last_pulse_ = record.pulse_index;
  any_ = true;

  const std::uint64_t p = record.pulse_index;
  const std::uint64_t horizon = p >= static_cast<std::uint64_t>(max_delay_)
                                    ? p - static_cast<std::uint64_t>(max_delay_)
                                    : 0;
  while (!recent_s_.empty() && recent_s_.front() < horizon) recent_s_.pop_front();
  while (!recent_as_.empty() && recent_as_.front() < horizon) recent_as_.pop_front();

  if (record.channel == Channel::S) {
    ++total_s_;
    // delay d = q - p with aS at q <= p, so d = -(p - q) here
    for (std::uint64_t q : recent_as_) {
      const int d = -static_cast<int>(p - q);
      ++counts_[static_cast<std::size_t>(d + max_delay_)];
    }
    recent_s_.push_back(p);
  } else {
    ++total_as_;
    for (std::uint64_t q : recent_s_) {
      const int d = static_cast<int>(p - q);
      ++counts_[static_cast<std::size_t>(d + max_delay_)];
    }
    recent_as_.push_back(p);
  }
}

void HistogramAccumulator::add_chunk(std::span<const EventRecord> records) {
  for (const auto& r : records) add(r);
}

CoincidenceHistogram HistogramAccumulator::finish(std::uint64_t n_pulses,
                                                  double rep_rate_hz) const {
  if (rep_rate_hz <= 0.0) throw data_error("repetition rate must be positive");
  CoincidenceHistogram h;
  h.max_delay = max_delay_;
  h.counts = counts_;
  h.n_pulses = n_pulses;
  h.accumulation_time_s = static_cast<double>(n_pulses) / rep_rate_hz;
  h.total_s = total_s_;
  h.total_as = total_as_;
  return h;
}

CoincidenceHistogram histogram(const EventStream& stream, int max_delay) {
  HistogramAccumulator acc(max_delay);
  acc.add_chunk(stream.records);
  return acc.finish(stream.n_pulses, stream.rep_rate_hz);
}

CorrelatedRateResult extract_correlated_rate(const CoincidenceHistogram& h) {
  if (h.accumulation_time_s <= 0.0) throw data_error("histogram has no accumulation time");
  const double n_zero = static_cast<double>(h.at(0));
  const double n_base = h.baseline_count();
  if (n_base == 0.0 && n_zero > 0.0)
    throw data_error("all off-zero delay bins are empty, baseline is undefined");

  const double t = h.accumulation_time_s;
  CorrelatedRateResult r;
  r.rate_zero_cps = n_zero / t;
  r.baseline_cps = n_base / t;
  r.corr_rate_cps = r.rate_zero_cps - r.baseline_cps;
  r.uncertainty_cps = (std::sqrt(n_zero) + std::sqrt(n_base)) / t;
  r.g2_zero = n_base > 0.0 ? n_zero / n_base
                           : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::vector<std::pair<int, double>> g2_curve(const CoincidenceHistogram& h) {
  const double n_base = h.baseline_count();
  if (n_base == 0.0) throw data_error("all off-zero delay bins are empty, baseline is undefined");
  std::vector<std::pair<int, double>> curve;
  curve.reserve(h.counts.size());
  for (int d = -h.max_delay; d <= h.max_delay; ++d)
    curve.emplace_back(d, static_cast<double>(h.at(d)) / n_base);
  return curve;
}

}  // namespace sas
