#include <catch2/catch_amalgamated.hpp>

#include "cubictunnel/constants.hpp"
#include "cubictunnel/errors.hpp"
#include "cubictunnel/units.hpp"

using namespace cubictunnel;

namespace {
double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}
} // namespace

TEST_CASE("frozen constants", "[units]") {
    CHECK(constants::hbar_c_ev_angstrom == 1973.269804);
    CHECK(constants::electron_rest_energy_ev == 510998.95);
    CHECK(constants::boltzmann_mev_per_kelvin == 0.08617333);
}

TEST_CASE("benchmark parameter set", "[units]") {
    const auto p = units::derive_params(1000.0, 20.0, 1.0);
    CHECK(rel(p.mass_internal, 0.13123421188362328) < 1e-14);
    CHECK(rel(p.gamma, 52.49368475344931) < 1e-14);
    CHECK(rel(p.barrier_height, 8.748947458908217) < 1e-14);
    CHECK(rel(p.action_scale, 3.1496210852069586) < 1e-14);
    CHECK(rel(p.t_crossover, 36.9383295485727) < 1e-12);
    CHECK(p.mass == 1000.0);
    CHECK(p.hbar_omega == 20.0);
    CHECK(p.a == 1.0);
}

TEST_CASE("derived scales obey the defining relations", "[units]") {
    const auto p = units::derive_params(750.0, 12.5, 2.25);
    const double m = p.mass_internal;
    const double w = p.hbar_omega;
    const double a = p.a;
    CHECK(rel(p.gamma, m * w * w / a) < 1e-15);
    CHECK(rel(p.barrier_height, m * w * w * a * a / 6.0) < 1e-15);
    CHECK(rel(p.action_scale, 1.2 * m * w * a * a) < 1e-15);
    CHECK(rel(p.t_crossover,
              w / (2.0 * constants::pi * constants::boltzmann_mev_per_kelvin)) < 1e-15);
    // mass_internal converts electron masses to meV^-1 Angstrom^-2.
    const double expected = 750.0 * constants::electron_rest_energy_ev /
                            (constants::hbar_c_ev_angstrom * constants::hbar_c_ev_angstrom) *
                            1e-3;
    CHECK(rel(p.mass_internal, expected) < 1e-15);
}

TEST_CASE("mass scales linearly, barrier quadratically in a", "[units]") {
    const auto p1 = units::derive_params(1000.0, 20.0, 1.0);
    const auto p2 = units::derive_params(500.0, 20.0, 1.0);
    const auto p3 = units::derive_params(1000.0, 20.0, 2.0);
    CHECK(rel(p1.mass_internal, 2.0 * p2.mass_internal) < 1e-15);
    CHECK(rel(p3.barrier_height, 4.0 * p1.barrier_height) < 1e-15);
    // The crossover temperature depends only on the frequency.
    CHECK(p1.t_crossover == p2.t_crossover);
    const auto p4 = units::derive_params(1000.0, 10.0, 1.0);
    CHECK(rel(p4.t_crossover, 18.46916477428635) < 1e-12);
}

TEST_CASE("parameter domain is enforced", "[units]") {
    CHECK_THROWS_AS(units::derive_params(0.0, 20.0, 1.0), ParameterDomainError);
    CHECK_THROWS_AS(units::derive_params(1000.0, -1.0, 1.0), ParameterDomainError);
    CHECK_THROWS_AS(units::derive_params(1000.0, 20.0, 0.0), ParameterDomainError);
    CHECK_THROWS_AS(units::derive_params(std::nan(""), 20.0, 1.0), ParameterDomainError);
}
