#ifndef SAS_FITTING_HPP
#define SAS_FITTING_HPP

#include <vector>

#include "sas/fit_result.hpp"
#include "sas/physics.hpp"

namespace sas {

struct SpectralRatePoint {
  double shift_cm1 = 0.0;
  double corr_rate_cps = 0.0;
  double uncertainty_cps = 0.0;  // one sigma, > 0
};

// Correlated-rate data versus Raman shift. Points may appear at both signs of
// the shift; band membership uses |shift|.
struct SpectralRateSeries {
  std::vector<SpectralRatePoint> points;
  LaserConfig laser;
  CollectionConfig collection;

  void validate() const;
};

enum class BaselineModel { None, Linear };

// Area under a spectrum inside [window_lo, window_hi], baseline subtracted.
// Linear baseline is the chord through the spectrum values at the window
// edges. Negative baselined intensities clamp to zero before the trapezoid
// rule; the window edges are interpolated so the integral covers the window
// exactly. Throws data_error when the window leaves the spectrum domain.
double raman_peak_area(const std::vector<SpectrumPoint>& spectrum, double window_lo_cm1,
                       double window_hi_cm1, BaselineModel baseline);

// Weighted estimate of the per-band coupling constants. The model rate inside
// band i is constant, C_i^2 * K_i with
//   K_i = delta_k_i * (|alpha_L|^2 A_i T_L / hbar)^2 * R_L,
// so each C_i has the closed form sqrt(weighted_mean_rate / K_i). Parameters
// are named "C_1st" and "C_2nd". A band with no data points is reported as
// unidentifiable (NaN value, infinite error). Zero or negative mean rate gives
// C = 0 with the error scale at which C^2 separates from zero.
FitResult fit_step_constants(const SpectralRateSeries& series, const MaterialModel& material);

struct PowerLawPoint {
  double power_w = 0.0;
  double rate_cps = 0.0;
  double uncertainty_cps = 0.0;
};

// Weighted fit of rate = a * P^b in log space; parameters "amplitude" and
// "exponent". Points with rate <= 0 are excluded; fewer than 3 usable points
// is an error, as is any nonpositive power. When any uncertainty is
// nonpositive the fit falls back to unit weights (exact synthetic data).
FitResult fit_power_law(const std::vector<PowerLawPoint>& points);

struct CrossSectionPoint {
  double area_sq = 0.0;  // squared Raman peak area, normalized
  double rate = 0.0;
  double uncertainty = 0.0;
};

// Weighted zero-intercept line rate = slope * area_sq; parameter "slope".
// Throws data_error when every abscissa is zero. Unit-weight fallback as in
// fit_power_law.
FitResult fit_cross_section_scaling(const std::vector<CrossSectionPoint>& points);

}  // namespace sas

#endif
