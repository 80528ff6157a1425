#ifndef SAS_CONSTANTS_HPP
#define SAS_CONSTANTS_HPP

namespace sas::constants {

// All energies in this codebase are eV, shifts are cm^-1, times are s.
// Every derived number depends on this one set of constants.
inline constexpr double hbar_ev_s = 6.58212e-16;        // reduced Planck, eV s
inline constexpr double hc_ev_cm = 1.23984e-4;          // h*c, eV cm
inline constexpr double k_boltzmann_ev_per_k = 8.61733e-5;  // eV / K
inline constexpr double joule_per_ev = 1.602176634e-19;     // exact SI

}  // namespace sas::constants

#endif
