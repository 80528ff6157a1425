#include "sas/physics.hpp"

#include <algorithm>
#include <cmath>

#include "sas/constants.hpp"
#include "sas/errors.hpp"

namespace sas {

namespace {
constexpr double nm_to_cm = 1e-7;
}

double LaserConfig::photon_energy_ev() const {
  return constants::hc_ev_cm / (wavelength_nm * nm_to_cm);
}

void LaserConfig::validate() const {
  if (!(wavelength_nm > 0.0) || !(pulse_width_s > 0.0) || !(rep_rate_hz > 0.0) ||
      !(power_w >= 0.0)) {
    throw data_error("laser config: wavelength, pulse width and rep rate must be "
                     "positive, power non-negative");
  }
  if (!(pulse_width_s * rep_rate_hz < 1.0)) {
    throw data_error("laser config: duty cycle pulse_width * rep_rate must be below 1");
  }
}

void PotentialBand::validate() const {
  if (!(shift_lo_cm1 >= 0.0) || !(shift_lo_cm1 < shift_hi_cm1)) {
    throw data_error("potential band: need 0 <= shift_lo < shift_hi");
  }
  if (!(v0_ev >= 0.0)) {
    throw data_error("potential band: v0 must be a non-negative magnitude");
  }
}

void MaterialModel::validate() const {
  for (std::size_t i = 1; i < spectrum.size(); ++i) {
    if (!(spectrum[i - 1].shift_cm1 < spectrum[i].shift_cm1)) {
      throw data_error("material '" + name + "': spectrum shifts must be strictly increasing");
    }
  }
  if (!(temperature_k > 0.0)) {
    throw data_error("material '" + name + "': temperature must be positive");
  }
  if (stokes_area_1st < 0.0 || stokes_area_2nd < 0.0) {
    throw data_error("material '" + name + "': Raman areas must be non-negative");
  }
  for (const auto& band : bands) band.validate();
  for (std::size_t i = 1; i < bands.size(); ++i) {
    if (bands[i].shift_lo_cm1 < bands[i - 1].shift_hi_cm1) {
      throw data_error("material '" + name + "': bands must be ordered and non-overlapping");
    }
  }
}

const PotentialBand* MaterialModel::band_containing(double shift_cm1) const {
  const double s = std::fabs(shift_cm1);
  for (const auto& band : bands) {
    if (band.contains(s)) return &band;
  }
  return nullptr;
}

void CollectionConfig::validate() const {
  if (!(mono_resolution_cm1 > 0.0)) {
    throw data_error("collection config: monochromator resolution must be positive");
  }
  if (detection_efficiency_s < 0.0 || detection_efficiency_s > 1.0 ||
      detection_efficiency_as < 0.0 || detection_efficiency_as > 1.0) {
    throw data_error("collection config: detection efficiencies must lie in [0,1]");
  }
  if (!(accumulation_time_s > 0.0)) {
    throw data_error("collection config: accumulation time must be positive");
  }
}

double shift_to_energy(double shift_cm1) {
  return shift_cm1 * constants::hc_ev_cm;
}

double energy_to_shift(double energy_ev) {
  return energy_ev / constants::hc_ev_cm;
}

double photons_per_pulse(const LaserConfig& laser) {
  laser.validate();
  const double photon_energy_j = laser.photon_energy_ev() * constants::joule_per_ev;
  return laser.power_w / (photon_energy_j * laser.rep_rate_hz);
}

double step_potential(double shift_cm1, const MaterialModel& material) {
  const PotentialBand* band = material.band_containing(shift_cm1);
  return band ? -band->v0_ev : 0.0;
}

double v0_from_raman_area(double area, double coupling_c) {
  if (area < 0.0 || coupling_c < 0.0) {
    throw data_error("v0_from_raman_area: area and coupling must be non-negative");
  }
  return coupling_c * area;
}

double pair_rate(const LaserConfig& laser, double v0_ev, double delta_k) {
  if (!(delta_k > 0.0) || delta_k > 1.0) {
    throw data_error("pair_rate: delta_k must lie in (0,1]");
  }
  if (v0_ev < 0.0) {
    throw data_error("pair_rate: v0 must be non-negative");
  }
  const double amplitude = photons_per_pulse(laser) * v0_ev *
                           laser.pulse_width_s / constants::hbar_ev_s;
  return delta_k * amplitude * amplitude * laser.rep_rate_hz;
}

double delta_k(const CollectionConfig& collection, const PotentialBand& band) {
  if (!(collection.mono_resolution_cm1 > 0.0)) {
    throw data_error("delta_k: monochromator resolution must be positive");
  }
  if (!(band.total_range_cm1() > 0.0)) {
    throw data_error("delta_k: band range must be positive");
  }
  return std::min(1.0, collection.mono_resolution_cm1 / band.total_range_cm1());
}

double interaction_amplitude_from_rate(double rate_cps, double delta_k,
                                       const LaserConfig& laser) {
  if (rate_cps < 0.0) {
    throw data_error("interaction_amplitude_from_rate: rate must be non-negative");
  }
  const double denom = delta_k * laser.rep_rate_hz;
  if (!(denom > 0.0)) {
    throw data_error("interaction_amplitude_from_rate: delta_k * rep_rate must be positive");
  }
  return constants::hbar_ev_s / laser.pulse_width_s * std::sqrt(rate_cps / denom);
}

double project_enhancement(double delta_ev, double enhancement_factor) {
  if (enhancement_factor < 0.0) {
    throw data_error("project_enhancement: factor must be non-negative");
  }
  return delta_ev * std::sqrt(enhancement_factor);
}

double bose_occupation(double phonon_energy_ev, double temperature_k) {
  if (!(phonon_energy_ev > 0.0) || !(temperature_k > 0.0)) {
    throw data_error("bose_occupation: energy and temperature must be positive");
  }
  const double x = phonon_energy_ev / (constants::k_boltzmann_ev_per_k * temperature_k);
  return 1.0 / std::expm1(x);
}

MaterialModel make_two_band_material(std::string name,
                                     std::vector<SpectrumPoint> spectrum,
                                     double temperature_k,
                                     double band_1st_hi_cm1,
                                     double band_2nd_hi_cm1,
                                     double stokes_area_1st,
                                     double stokes_area_2nd,
                                     double coupling_c1_ev_cm_s,
                                     double coupling_c2_ev_cm_s) {
  MaterialModel m;
  m.name = std::move(name);
  m.spectrum = std::move(spectrum);
  m.temperature_k = temperature_k;
  m.stokes_area_1st = stokes_area_1st;
  m.stokes_area_2nd = stokes_area_2nd;
  m.coupling_c1_ev_cm_s = coupling_c1_ev_cm_s;
  m.coupling_c2_ev_cm_s = coupling_c2_ev_cm_s;
  m.bands.push_back({0.0, band_1st_hi_cm1,
                     v0_from_raman_area(stokes_area_1st, coupling_c1_ev_cm_s)});
  if (band_2nd_hi_cm1 > band_1st_hi_cm1) {
    m.bands.push_back({band_1st_hi_cm1, band_2nd_hi_cm1,
                       v0_from_raman_area(stokes_area_2nd, coupling_c2_ev_cm_s)});
  }
  m.validate();
  return m;
}

}  // namespace sas
