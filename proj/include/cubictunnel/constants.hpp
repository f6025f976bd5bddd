#pragma once

#include <numbers>

namespace cubictunnel::constants {

// Frozen physical constants (CODATA 2018, 8 significant digits).
// Kept in one table so golden outputs are bit-stable across builds.
inline constexpr double hbar_c_ev_angstrom = 1973.269804; // eV * Angstrom
inline constexpr double electron_rest_energy_ev = 510998.95; // eV
inline constexpr double boltzmann_mev_per_kelvin = 0.08617333; // meV / K

inline constexpr double pi = std::numbers::pi;

// Internal unit system: energies in meV, lengths in Angstrom, times in hbar/meV.
// hbar = 1 in these units; masses carry meV^-1 * Angstrom^-2.

} // namespace cubictunnel::constants
