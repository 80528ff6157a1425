#include "sas/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sas/errors.hpp"
#include "sas/levmar.hpp"

namespace sas {

namespace {

constexpr double kWeightTol = 1e-9;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

void SpatialProfile::validate() const {
  if (components.empty()) throw data_error("spatial profile needs at least one component");
  double wsum = 0.0;
  for (const auto& c : components) {
    if (!(c.sigma_mm > 0.0)) throw data_error("spatial profile sigma must be positive");
    if (c.weight < 0.0) throw data_error("spatial profile weights must be nonnegative");
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > kWeightTol)
    throw data_error("spatial profile weights must sum to 1");
}

std::string to_string(ApertureChannel channel) {
  switch (channel) {
    case ApertureChannel::Laser: return "laser";
    case ApertureChannel::S: return "S";
    case ApertureChannel::AS: return "aS";
    case ApertureChannel::SaSCorrelated: return "SaS_corr";
    case ApertureChannel::SaSAccidental: return "SaS_accidental";
  }
  return "unknown";
}

void ApertureCurve::validate() const {
  if (points.empty()) throw data_error("aperture curve has no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.radius_mm >= 0.0)) throw data_error("aperture radius must be nonnegative");
    if (p.intensity < -1e-9 || p.intensity > 1.0 + 1e-9)
      throw data_error("aperture intensity must lie in [0, 1]");
    if (i > 0) {
      if (!(p.radius_mm > points[i - 1].radius_mm))
        throw data_error("aperture radii must be strictly increasing");
      if (p.intensity < points[i - 1].intensity - 1e-9)
        throw data_error("aperture intensities must be nondecreasing (cumulative power)");
    }
  }
}

double transmitted_fraction(const SpatialProfile& profile, double radius_mm) {
  if (radius_mm < 0.0) throw data_error("aperture radius must be nonnegative");
  double f = 0.0;
  for (const auto& c : profile.components)
    f += c.weight * (1.0 - std::exp(-radius_mm * radius_mm / (2.0 * c.sigma_mm * c.sigma_mm)));
  return f;
}

namespace {

// Radius where the curve first crosses half of its final level; a crude but
// start-friendly width scale (r_half = sigma * sqrt(2 ln 2) for one Gaussian).
double half_rise_radius(const ApertureCurve& curve) {
  const double top = curve.points.back().intensity;
  const double half = 0.5 * top;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (curve.points[i].intensity >= half) {
      if (i == 0) return std::max(curve.points[0].radius_mm, 1e-3);
      const auto& a = curve.points[i - 1];
      const auto& b = curve.points[i];
      const double t = (half - a.intensity) / std::max(b.intensity - a.intensity, 1e-300);
      return a.radius_mm + t * (b.radius_mm - a.radius_mm);
    }
  }
  return curve.points.back().radius_mm;
}

SpatialProfile profile_from_theta(const Eigen::VectorXd& theta, int n_components) {
  SpatialProfile p;
  if (n_components == 1) {
    p.components = {{1.0, std::exp(theta[0])}};
  } else {
    const double w = logistic(theta[0]);
    p.components = {{w, std::exp(theta[1])}, {1.0 - w, std::exp(theta[2])}};
  }
  return p;
}

FitResult failed_fit(const ApertureCurve& curve, int n_components) {
  FitResult fr;
  fr.converged = false;
  fr.n_points = curve.points.size();
  fr.residual_norm = std::numeric_limits<double>::quiet_NaN();
  if (n_components == 1) {
    fr.parameters = {{"sigma", std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::infinity(), false}};
  } else {
    for (const char* name : {"weight_1", "sigma_1", "weight_2", "sigma_2"})
      fr.parameters.push_back({name, std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::infinity(), false});
  }
  return fr;
}

}  // namespace

std::pair<SpatialProfile, FitResult> fit_profile(const ApertureCurve& curve,
                                                 int n_components) {
  if (n_components != 1 && n_components != 2)
    throw data_error("fit_profile supports 1 or 2 components");
  curve.validate();
  const std::size_t n_free = n_components == 1 ? 1 : 3;
  if (curve.points.size() < 3 * n_free)
    throw data_error("aperture fit needs at least 3 points per free parameter");

  double lo = curve.points.front().intensity;
  double hi = curve.points.back().intensity;
  if (hi - lo < 1e-9) {
    // No radial contrast: any width reproduces the constant level equally badly.
    SpatialProfile flat;
    flat.components.assign(static_cast<std::size_t>(n_components),
                           {1.0 / n_components, 1.0});
    return {flat, failed_fit(curve, n_components)};
  }

  auto residual = [&](const Eigen::VectorXd& theta) {
    const SpatialProfile prof = profile_from_theta(theta, n_components);
    Eigen::VectorXd r(static_cast<Eigen::Index>(curve.points.size()));
    for (std::size_t i = 0; i < curve.points.size(); ++i)
      r[static_cast<Eigen::Index>(i)] =
          transmitted_fraction(prof, curve.points[i].radius_mm) - curve.points[i].intensity;
    return r;
  };

  const double s0 = half_rise_radius(curve) / std::sqrt(2.0 * std::log(2.0));
  std::vector<Eigen::VectorXd> starts;
  if (n_components == 1) {
    for (double scale : {0.3, 0.6, 1.0, 2.0, 4.0}) {
      Eigen::VectorXd t(1);
      t << std::log(s0 * scale);
      starts.push_back(t);
    }
  } else {
    const double splits[5][3] = {{0.5, 0.5, 2.0},
                                 {0.3, 0.3, 1.5},
                                 {0.7, 0.3, 1.5},
                                 {0.5, 1.0, 3.0},
                                 {0.2, 0.2, 1.0}};
    for (const auto& s : splits) {
      Eigen::VectorXd t(3);
      t << logit(s[0]), std::log(s0 * s[1]), std::log(s0 * s[2]);
      starts.push_back(t);
    }
  }

  LevmarOptions opt;
  LevmarOutput best;
  bool have_best = false;
  for (const auto& start : starts) {
    const LevmarOutput out = levmar_fit(residual, start, opt);
    const bool better =
        !have_best ||
        (out.converged && !best.converged) ||
        (out.converged == best.converged && out.residual_norm < best.residual_norm);
    if (better) {
      best = out;
      have_best = true;
    }
  }

  const SpatialProfile prof = profile_from_theta(best.params, n_components);
  FitResult fr;
  fr.converged = best.converged;
  fr.n_points = curve.points.size();
  fr.residual_norm = best.residual_norm;

  const std::size_t dof = curve.points.size() > n_free ? curve.points.size() - n_free : 1;
  const double s2 = best.residual_norm * best.residual_norm / static_cast<double>(dof);
  auto theta_err = [&](int k) {
    const double v = best.covariance(k, k);
    return v > 0.0 && std::isfinite(v) ? std::sqrt(s2 * v)
                                       : std::numeric_limits<double>::infinity();
  };

  if (n_components == 1) {
    const double sigma = prof.components[0].sigma_mm;
    fr.parameters = {{"sigma", sigma, sigma * theta_err(0), best.converged}};
    return {prof, fr};
  }

  // Report narrow component first for a stable ordering.
  int narrow = prof.components[0].sigma_mm <= prof.components[1].sigma_mm ? 0 : 1;
  int wide = 1 - narrow;
  const double w1 = prof.components[narrow].weight;
  const double sig_err[2] = {prof.components[0].sigma_mm * theta_err(1),
                             prof.components[1].sigma_mm * theta_err(2)};
  const double w_err = w1 * (1.0 - w1) * theta_err(0);  // logistic delta method
  fr.parameters = {
      {"weight_1", prof.components[narrow].weight, w_err, best.converged},
      {"sigma_1", prof.components[narrow].sigma_mm, sig_err[narrow], best.converged},
      {"weight_2", prof.components[wide].weight, w_err, best.converged},
      {"sigma_2", prof.components[wide].sigma_mm, sig_err[wide], best.converged},
  };
  SpatialProfile ordered;
  ordered.components = {prof.components[narrow], prof.components[wide]};
  return {ordered, fr};
}

RatioCurve ratio_curve(const ApertureCurve& s_curve, const ApertureCurve& as_curve) {
  s_curve.validate();
  as_curve.validate();
  if (s_curve.points.size() != as_curve.points.size())
    throw data_error("S and aS aperture curves must share one radius grid");
  RatioCurve out;
  for (std::size_t i = 0; i < s_curve.points.size(); ++i) {
    const double r_s = s_curve.points[i].radius_mm;
    const double r_as = as_curve.points[i].radius_mm;
    if (std::abs(r_s - r_as) > 1e-9 * std::max(1.0, std::abs(r_s)))
      throw data_error("S and aS aperture curves must share one radius grid");
    if (as_curve.points[i].intensity == 0.0) {
      out.omitted_radii.push_back(r_s);
    } else {
      out.points.emplace_back(r_s, s_curve.points[i].intensity / as_curve.points[i].intensity);
    }
  }
  return out;
}

}  // namespace sas
