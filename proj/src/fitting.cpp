#include "sas/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sas/constants.hpp"
#include "sas/errors.hpp"

namespace sas {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double interpolate_intensity(const std::vector<SpectrumPoint>& spectrum, double shift) {
  auto it = std::lower_bound(spectrum.begin(), spectrum.end(), shift,
                             [](const SpectrumPoint& p, double s) { return p.shift_cm1 < s; });
  if (it == spectrum.begin()) return it->intensity_cps;
  if (it == spectrum.end()) return spectrum.back().intensity_cps;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double t = (shift - a.shift_cm1) / (b.shift_cm1 - a.shift_cm1);
  return a.intensity_cps + t * (b.intensity_cps - a.intensity_cps);
}

}  // namespace

void SpectralRateSeries::validate() const {
  laser.validate();
  collection.validate();
  if (points.empty()) throw data_error("spectral rate series has no points");
  for (const auto& p : points)
    if (!(p.uncertainty_cps > 0.0))
      throw data_error("spectral rate uncertainties must be positive");
}

double raman_peak_area(const std::vector<SpectrumPoint>& spectrum, double window_lo_cm1,
                       double window_hi_cm1, BaselineModel baseline) {
  if (spectrum.size() < 2) throw data_error("spectrum needs at least two points");
  if (!(window_lo_cm1 < window_hi_cm1)) throw data_error("peak window is empty");
  if (window_lo_cm1 < spectrum.front().shift_cm1 || window_hi_cm1 > spectrum.back().shift_cm1)
    throw data_error("peak window leaves the spectrum domain");

  // Sample points: interpolated window edges plus every grid point inside.
  std::vector<SpectrumPoint> samples;
  samples.push_back({window_lo_cm1, interpolate_intensity(spectrum, window_lo_cm1)});
  for (const auto& p : spectrum)
    if (p.shift_cm1 > window_lo_cm1 && p.shift_cm1 < window_hi_cm1) samples.push_back(p);
  samples.push_back({window_hi_cm1, interpolate_intensity(spectrum, window_hi_cm1)});

  const double y_lo = samples.front().intensity_cps;
  const double y_hi = samples.back().intensity_cps;
  auto baseline_at = [&](double shift) {
    if (baseline == BaselineModel::None) return 0.0;
    const double t = (shift - window_lo_cm1) / (window_hi_cm1 - window_lo_cm1);
    return y_lo + t * (y_hi - y_lo);
  };

  double area = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double f0 =
        std::max(0.0, samples[i - 1].intensity_cps - baseline_at(samples[i - 1].shift_cm1));
    const double f1 = std::max(0.0, samples[i].intensity_cps - baseline_at(samples[i].shift_cm1));
    area += 0.5 * (f0 + f1) * (samples[i].shift_cm1 - samples[i - 1].shift_cm1);
  }
  return area;
}

FitResult fit_step_constants(const SpectralRateSeries& series, const MaterialModel& material) {
  series.validate();
  material.validate();
  if (material.bands.empty()) throw data_error("material has no potential bands");
  if (material.bands.size() > 2)
    throw data_error("step-constant fit handles at most two bands");

  const double alpha2 = photons_per_pulse(series.laser);
  const double areas[2] = {material.stokes_area_1st, material.stokes_area_2nd};

  FitResult fr;
  fr.converged = false;
  double wss = 0.0;
  std::size_t used = 0;

  for (std::size_t b = 0; b < material.bands.size(); ++b) {
    const PotentialBand& band = material.bands[b];
    const char* name = b == 0 ? "C_1st" : "C_2nd";
    const double amp = alpha2 * areas[b] * series.laser.pulse_width_s / constants::hbar_ev_s;
    const double k = delta_k(series.collection, band) * amp * amp * series.laser.rep_rate_hz;

    double sw = 0.0, swy = 0.0;
    std::size_t n = 0;
    for (const auto& p : series.points) {
      if (material.band_containing(p.shift_cm1) != &band) continue;
      const double w = 1.0 / (p.uncertainty_cps * p.uncertainty_cps);
      sw += w;
      swy += w * p.corr_rate_cps;
      ++n;
    }

    if (n == 0 || !(k > 0.0)) {
      fr.parameters.push_back({name, kNan, kInf, false});
      continue;
    }

    const double mean = swy / sw;
    const double se_mean = std::sqrt(1.0 / sw);
    double c, se;
    if (mean > 0.0) {
      c = std::sqrt(mean / k);
      se = se_mean / (2.0 * std::sqrt(mean * k));
    } else {
      c = 0.0;
      se = std::sqrt(se_mean / k);
    }
    fr.parameters.push_back({name, c, se, true});
    fr.converged = true;

    const double model = c * c * k;
    for (const auto& p : series.points) {
      if (material.band_containing(p.shift_cm1) != &band) continue;
      const double r = (p.corr_rate_cps - model) / p.uncertainty_cps;
      wss += r * r;
      ++used;
    }
  }

  fr.n_points = used;
  fr.residual_norm = std::sqrt(wss);
  return fr;
}

FitResult fit_power_law(const std::vector<PowerLawPoint>& points) {
  std::vector<PowerLawPoint> usable;
  bool unit_weights = false;
  for (const auto& p : points) {
    if (!(p.power_w > 0.0)) throw data_error("laser powers must be positive");
    if (p.rate_cps <= 0.0) continue;  // cannot take the log, excluded
    if (p.uncertainty_cps <= 0.0) unit_weights = true;
    usable.push_back(p);
  }
  if (usable.size() < 3) throw data_error("power-law fit needs at least 3 usable points");

  // rate = a P^b  =>  log rate = log a + b log P; sigma_log = sigma / rate.
  // Centered weighted sums keep the normal equations well conditioned.
  double sw = 0.0, sx = 0.0, sy = 0.0;
  double x_min = std::log(usable.front().power_w), x_max = x_min;
  for (const auto& p : usable) {
    const double x = std::log(p.power_w);
    const double y = std::log(p.rate_cps);
    const double slog = unit_weights ? 1.0 : p.uncertainty_cps / p.rate_cps;
    const double w = 1.0 / (slog * slog);
    sw += w;
    sx += w * x;
    sy += w * y;
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
  }
  if (x_max - x_min <= 1e-12 * std::max(1.0, std::abs(x_max)))
    throw data_error("power-law fit is degenerate (all powers equal)");
  const double x_mean = sx / sw;
  const double y_mean = sy / sw;
  double sxx_c = 0.0, sxy_c = 0.0;
  for (const auto& p : usable) {
    const double dx = std::log(p.power_w) - x_mean;
    const double dy = std::log(p.rate_cps) - y_mean;
    const double slog = unit_weights ? 1.0 : p.uncertainty_cps / p.rate_cps;
    const double w = 1.0 / (slog * slog);
    sxx_c += w * dx * dx;
    sxy_c += w * dx * dy;
  }
  if (!(sxx_c > 0.0)) throw data_error("power-law fit is degenerate (all powers equal)");
  const double slope = sxy_c / sxx_c;
  const double intercept = y_mean - slope * x_mean;
  const double var_intercept = 1.0 / sw + x_mean * x_mean / sxx_c;
  const double var_slope = 1.0 / sxx_c;

  double wss = 0.0;
  for (const auto& p : usable) {
    const double slog = unit_weights ? 1.0 : p.uncertainty_cps / p.rate_cps;
    const double r = (std::log(p.rate_cps) - intercept - slope * std::log(p.power_w)) / slog;
    wss += r * r;
  }

  const double amplitude = std::exp(intercept);
  FitResult fr;
  fr.parameters = {
      {"amplitude", amplitude, amplitude * std::sqrt(var_intercept), true},
      {"exponent", slope, std::sqrt(var_slope), true},
  };
  fr.residual_norm = std::sqrt(wss);
  fr.n_points = usable.size();
  fr.converged = true;
  return fr;
}

FitResult fit_cross_section_scaling(const std::vector<CrossSectionPoint>& points) {
  if (points.empty()) throw data_error("cross-section fit has no points");
  bool unit_weights = false;
  bool any_x = false;
  for (const auto& p : points) {
    if (p.uncertainty <= 0.0) unit_weights = true;
    if (p.area_sq != 0.0) any_x = true;
  }
  if (!any_x) throw data_error("cross-section fit needs a nonzero abscissa");

  double swxx = 0.0, swxy = 0.0;
  for (const auto& p : points) {
    const double w = unit_weights ? 1.0 : 1.0 / (p.uncertainty * p.uncertainty);
    swxx += w * p.area_sq * p.area_sq;
    swxy += w * p.area_sq * p.rate;
  }
  const double slope = swxy / swxx;
  const double se = std::sqrt(1.0 / swxx);

  double wss = 0.0;
  for (const auto& p : points) {
    const double sigma = unit_weights ? 1.0 : p.uncertainty;
    const double r = (p.rate - slope * p.area_sq) / sigma;
    wss += r * r;
  }

  FitResult fr;
  fr.parameters = {{"slope", slope, se, true}};
  fr.residual_norm = std::sqrt(wss);
  fr.n_points = points.size();
  fr.converged = true;
  return fr;
}

}  // namespace sas
