#ifndef PZW_UNITS_HPP
#define PZW_UNITS_HPP

// Working unit system: energies in eV, times in fs, lengths in Angstrom,
// electric fields in V/Angstrom, elementary charge e = 1.
// An electron carries charge -e.

namespace pzw::units {

inline constexpr double hbar = 0.6582119569;        // eV fs
inline constexpr double c_light = 2997.92458;       // Angstrom / fs
inline constexpr double nm = 10.0;                  // Angstrom per nm
inline constexpr double electron_charge = -1.0;     // units of e

} // namespace pzw::units

#endif
