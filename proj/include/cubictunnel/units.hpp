#pragma once

#include <string>

#include "cubictunnel/constants.hpp"
#include "cubictunnel/errors.hpp"

namespace cubictunnel::units {

// Cubic metastable potential V(x) = (M omega^2 / 2) x^2 - (gamma / 3) x^3 with
// gamma = M omega^2 / a, so x = a is the barrier top and V(a) = M omega^2 a^2 / 6.
// Immutable after construction; safe to share across threads.
struct PotentialParams {
    double mass = 0.0;           // particle mass, in electron masses
    double hbar_omega = 0.0;     // oscillator quantum, meV
    double a = 0.0;              // barrier-top position, Angstrom
    double gamma = 0.0;          // cubic coefficient M omega^2 / a, meV / Angstrom^3
    double barrier_height = 0.0; // V(a) = M omega^2 a^2 / 6, meV
    double action_scale = 0.0;   // (6/5) M omega a^2 / hbar, dimensionless zero-energy action
    double mass_internal = 0.0;  // M in internal units, meV^-1 * Angstrom^-2
    double t_crossover = 0.0;    // hbar omega / (2 pi k_B), Kelvin
};

// All derived fields follow from (mass, hbar_omega, a) and the frozen constant table.
inline PotentialParams derive_params(double mass_me, double hbar_omega_mev, double a_angstrom) {
    if (!(mass_me > 0.0) || !(hbar_omega_mev > 0.0) || !(a_angstrom > 0.0)) {
        throw ParameterDomainError("derive_params: mass, hbar_omega, a must all be positive");
    }
    PotentialParams p;
    p.mass = mass_me;
    p.hbar_omega = hbar_omega_mev;
    p.a = a_angstrom;
    // M c^2 in meV divided by (hbar c in meV*Angstrom)^2 gives meV^-1 Angstrom^-2.
    p.mass_internal = mass_me * constants::electron_rest_energy_ev /
                      (constants::hbar_c_ev_angstrom * constants::hbar_c_ev_angstrom) * 1e-3;
    p.gamma = p.mass_internal * hbar_omega_mev * hbar_omega_mev / a_angstrom;
    p.barrier_height = p.mass_internal * hbar_omega_mev * hbar_omega_mev * a_angstrom * a_angstrom / 6.0;
    p.action_scale = 1.2 * p.mass_internal * hbar_omega_mev * a_angstrom * a_angstrom;
    p.t_crossover = hbar_omega_mev / (2.0 * constants::pi * constants::boltzmann_mev_per_kelvin);
    return p;
}

} // namespace cubictunnel::units
