#ifndef SAS_PHYSICS_HPP
#define SAS_PHYSICS_HPP

#include <string>
#include <vector>

namespace sas {

// Pump pulse train. Wavelength kept in nm (spectroscopy convention),
// everything else SI.
struct LaserConfig {
  double wavelength_nm = 0.0;
  double pulse_width_s = 0.0;  // T_L
  double rep_rate_hz = 0.0;    // R_L
  double power_w = 0.0;        // P_L

  double photon_energy_ev() const;
  // Throws data_error unless all fields are positive and the duty cycle
  // pulse_width * rep_rate stays below unity.
  void validate() const;
};

// One step of the pairing potential: constant attraction -v0 for Raman shift
// moduli inside [shift_lo, shift_hi], zero contribution outside. v0 is stored
// as a positive magnitude; the signed potential is -v0. Adjacent bands may
// touch at an edge; lookups resolve the shared point to the earlier band, so
// a measurement window centered exactly on the 1st-order phonon energy uses
// the 1st-order constants.
struct PotentialBand {
  double shift_lo_cm1 = 0.0;
  double shift_hi_cm1 = 0.0;
  double v0_ev = 0.0;

  bool contains(double abs_shift_cm1) const {
    return abs_shift_cm1 >= shift_lo_cm1 && abs_shift_cm1 <= shift_hi_cm1;
  }
  // Full scattering range of nonzero potential for this band's order: the
  // potential extends from zero shift up to the band's upper edge, so the
  // spectral-collection denominator is shift_hi, not the band width.
  double total_range_cm1() const { return shift_hi_cm1; }
  void validate() const;
};

struct SpectrumPoint {
  double shift_cm1 = 0.0;
  double intensity_cps = 0.0;  // count rate through the monochromator at its resolution
};

struct MaterialModel {
  std::string name;
  std::vector<SpectrumPoint> spectrum;  // shifts strictly increasing
  double temperature_k = 295.0;
  std::vector<PotentialBand> bands;     // ordered, non-overlapping
  double stokes_area_1st = 0.0;         // counts cm^-1 / s, A_S of the 1st-order peak
  double stokes_area_2nd = 0.0;
  double coupling_c1_ev_cm_s = 0.0;     // C^1st
  double coupling_c2_ev_cm_s = 0.0;     // C^2nd

  void validate() const;
  // Band containing |shift|, nullptr when the shift lies outside every band.
  const PotentialBand* band_containing(double shift_cm1) const;
};

struct CollectionConfig {
  double mono_resolution_cm1 = 26.0;
  double stokes_center_cm1 = 0.0;
  double detection_efficiency_s = 1.0;
  double detection_efficiency_as = 1.0;
  double accumulation_time_s = 600.0;

  void validate() const;
};

// cm^-1 <-> eV unit bridge. Linear and odd; sign preserved.
double shift_to_energy(double shift_cm1);
double energy_to_shift(double energy_ev);

// Mean pump photon number per pulse, |alpha_L|^2 = P_L / (E_photon R_L).
double photons_per_pulse(const LaserConfig& laser);

// Step potential value at a Raman shift: -v0 of the band containing |shift|,
// zero outside all bands. Even in the shift.
double step_potential(double shift_cm1, const MaterialModel& material);

// |V0| = C * A_S.
double v0_from_raman_area(double area, double coupling_c);

// Correlated pair production rate, counts/s:
//   rate = delta_k * (|alpha_L|^2 v0 T_L / hbar)^2 * R_L.
double pair_rate(const LaserConfig& laser, double v0_ev, double delta_k);

// Spectral collection fraction: monochromator resolution over the band's
// total nonzero-potential range, clamped to <= 1.
double delta_k(const CollectionConfig& collection, const PotentialBand& band);

// Inverts pair_rate for the transition amplitude Delta = V0 |alpha_L|^2:
//   Delta = (hbar / T_L) * sqrt(rate / (delta_k R_L)).
double interaction_amplitude_from_rate(double rate_cps, double delta_k,
                                       const LaserConfig& laser);

// Scales an interaction energy by a pair-rate enhancement factor; the rate is
// quadratic in Delta, so Delta picks up the square root.
double project_enhancement(double delta_ev, double enhancement_factor);

// Thermal phonon occupation 1 / (exp(E/kT) - 1).
double bose_occupation(double phonon_energy_ev, double temperature_k);

// Builds a 1st(+optional 2nd)-order material with band strengths derived
// from the Raman areas: v0_i = C_i * A_i. Pass band_2nd_hi_cm1 <= band_1st_hi
// to get a single-band material.
MaterialModel make_two_band_material(std::string name,
                                     std::vector<SpectrumPoint> spectrum,
                                     double temperature_k,
                                     double band_1st_hi_cm1,
                                     double band_2nd_hi_cm1,
                                     double stokes_area_1st,
                                     double stokes_area_2nd,
                                     double coupling_c1_ev_cm_s,
                                     double coupling_c2_ev_cm_s);

}  // namespace sas

#endif
