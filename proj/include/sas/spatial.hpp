#ifndef SAS_SPATIAL_HPP
#define SAS_SPATIAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "sas/fit_result.hpp"

namespace sas {

// Radially symmetric Gaussian angular profile, possibly a weighted mixture.
struct GaussianComponent {
  double weight = 1.0;    // dimensionless, >= 0
  double sigma_mm = 1.0;  // width of the component, > 0
};

struct SpatialProfile {
  std::vector<GaussianComponent> components;

  // Throws data_error unless there is at least one component, every sigma is
  // positive, weights are nonnegative and sum to 1 (1e-9 tolerance).
  void validate() const;
};

enum class ApertureChannel { Laser, S, AS, SaSCorrelated, SaSAccidental };

std::string to_string(ApertureChannel channel);

struct AperturePoint {
  double radius_mm = 0.0;
  double intensity = 0.0;  // normalized transmitted intensity, in [0, 1]
};

// Transmitted intensity versus iris radius. Cumulative power, so intensities
// must be nondecreasing in radius.
struct ApertureCurve {
  ApertureChannel channel = ApertureChannel::Laser;
  std::vector<AperturePoint> points;

  void validate() const;
};

// Encircled power of the mixture through a circular aperture of radius r:
//   sum_i w_i * (1 - exp(-r^2 / (2 sigma_i^2)))
// 0 at r = 0, tends to the weight sum (1) as r grows, strictly increasing.
double transmitted_fraction(const SpatialProfile& profile, double radius_mm);

// Least-squares decomposition of an aperture curve into 1 or 2 Gaussian
// components. Sigmas are fitted in log space and the two-component weight
// through a logistic transform, so the constraints sigma > 0 and
// w in (0, 1) hold by construction. Five deterministic starts; the best
// converged run wins. Parameter names: "sigma" for one component,
// "weight_1"/"sigma_1"/"weight_2"/"sigma_2" (sigma_1 <= sigma_2) for two.
// Requires >= 3 points per free parameter (1 or 3). A curve with no radial
// contrast is degenerate: the fit returns converged = false with every
// parameter flagged unidentifiable. Non-convergence returns the best
// parameters found, flagged the same way.
std::pair<SpatialProfile, FitResult> fit_profile(const ApertureCurve& curve,
                                                 int n_components);

// Pointwise S/aS intensity ratio on a shared radius grid. Radii where the
// aS intensity is zero cannot be divided and are reported separately.
struct RatioCurve {
  std::vector<std::pair<double, double>> points;  // (radius, I_S / I_aS)
  std::vector<double> omitted_radii;              // aS = 0 here
};

// Throws data_error when the two radius grids differ.
RatioCurve ratio_curve(const ApertureCurve& s_curve, const ApertureCurve& as_curve);

}  // namespace sas

#endif
