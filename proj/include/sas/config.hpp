#ifndef SAS_CONFIG_HPP
#define SAS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>

#include "sas/montecarlo.hpp"
#include "sas/physics.hpp"

namespace sas {

struct SimulationParams {
  std::uint64_t n_pulses = 1000000;
  std::uint64_t seed = 0;
  int max_delay = 50;
  // Stokes-side collection window, defaulting to one monochromator
  // resolution centered on the collection's stokes_center.
  double window_lo_cm1 = 0.0;
  double window_hi_cm1 = 0.0;
};

struct ExperimentConfig {
  LaserConfig laser;
  MaterialModel material;
  CollectionConfig collection;
  SimulationParams simulation;
  std::filesystem::path output_dir = ".";

  void validate() const;
  ChannelProbabilities probabilities() const;
};

// Plain-text sectioned key-value format:
//
//   [laser]
//   wavelength_nm = 633
//   pulse_width_fs = 200
//   rep_rate_mhz = 76
//   power_mw = 40
//
//   [material]
//   name = diamond
//   spectrum_csv = diamond_spectrum.csv     # path relative to this file
//   temperature_k = 295                     # optional, default 295
//   band_1st_hi_cm1 = 1332
//   band_2nd_hi_cm1 = 2500                  # optional, 0 disables the 2nd band
//   stokes_area_1st_cps_cm1 = ...
//   stokes_area_2nd_cps_cm1 = ...           # optional, default 0
//   coupling_c1_ev_cm_s = ...
//   coupling_c2_ev_cm_s = ...               # optional, default 0
//
//   [collection]                            # all optional
//   mono_resolution_cm1 = 26
//   stokes_center_cm1 = 1332                # default: band_1st_hi
//   detection_efficiency_s = 1.0
//   detection_efficiency_as = 1.0
//   accumulation_time_s = 600
//
//   [simulation]                            # all optional
//   n_pulses = 1000000
//   seed = 0
//   max_delay = 50
//   stokes_window_lo_cm1 = ...              # default: center - resolution/2
//   stokes_window_hi_cm1 = ...              # default: center + resolution/2
//
//   [outputs]
//   directory = out                         # optional, default .
//
// Keys carry their units in the name. Unknown sections or keys, duplicate
// keys, and malformed lines are data errors with line numbers.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name,
                              const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace sas

#endif
