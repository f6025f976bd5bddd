#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cubictunnel/constants.hpp"
#include "cubictunnel/elliptic.hpp"
#include "cubictunnel/errors.hpp"
#include "cubictunnel/quadrature.hpp"

using namespace cubictunnel;
using elliptic::Modulus;

namespace {
double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}
} // namespace

TEST_CASE("complete integrals at reference points", "[elliptic]") {
    const auto half = Modulus::from_parameter_pair(0.5, 0.5);
    CHECK(rel(elliptic::complete_K(half), 1.8540746773013719) < 1e-15);
    CHECK(rel(elliptic::complete_E(half), 1.3506438810476755) < 1e-15);
    const auto zero = Modulus::from_parameter_pair(0.0, 1.0);
    CHECK(rel(elliptic::complete_K(zero), 0.5 * constants::pi) < 1e-15);
    CHECK(rel(elliptic::complete_E(zero), 0.5 * constants::pi) < 1e-15);
    // Degenerate modulus: K diverges, E -> 1.
    const auto one = Modulus::from_parameter_pair(1.0, 0.0);
    CHECK_THROWS_AS(elliptic::complete_K(one), DivergenceError);
    CHECK(elliptic::complete_E(one) == 1.0);
}

TEST_CASE("complete integrals against direct quadrature", "[elliptic]") {
    for (const double m : {0.1, 0.36, 0.65, 0.9}) {
        const auto mod = Modulus::from_parameter_pair(m, 1.0 - m);
        const double kq = quadrature::integrate(
            [&](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); },
            0.0, 0.5 * constants::pi, 64);
        const double eq = quadrature::integrate(
            [&](double t) { return std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); }, 0.0,
            0.5 * constants::pi, 64);
        CHECK(rel(elliptic::complete_K(mod), kq) < 1e-10);
        CHECK(rel(elliptic::complete_E(mod), eq) < 1e-10);
    }
}

TEST_CASE("complete K near the degenerate modulus", "[elliptic]") {
    // Logarithmic blow-up: K = log(4/p_bar) + O(p_bar^2 log).
    const double b = 1e-20;
    const auto mod = Modulus::from_p_bar_sq(b);
    const double asym = std::log(4.0) - 0.5 * std::log(b);
    CHECK(rel(elliptic::complete_K(mod), asym) < 1e-12);
    CHECK(mod.p_bar_sq == b);
}

TEST_CASE("incomplete integral matches reference value", "[elliptic]") {
    const auto mod = Modulus::from_parameter_pair(0.3, 0.7);
    CHECK(rel(elliptic::incomplete_F(1.0, mod), 1.0457364440164778) < 1e-14);
    CHECK(elliptic::incomplete_F(0.0, mod) == 0.0);
    CHECK(rel(elliptic::incomplete_F(0.5 * constants::pi, mod),
              elliptic::complete_K(mod)) < 1e-12);
    CHECK_THROWS_AS(elliptic::incomplete_F(2.0, mod), ParameterDomainError);
    CHECK_THROWS_AS(elliptic::incomplete_F(-0.1, mod), ParameterDomainError);
}

TEST_CASE("jacobi functions at reference points", "[elliptic]") {
    const auto j1 = elliptic::jacobi(0.7, Modulus::from_parameter_pair(0.36, 0.64));
    CHECK(rel(j1.sn, 0.629917115323486779) < 1e-13);
    CHECK(rel(j1.cn, 0.776662364108456756) < 1e-13);
    CHECK(rel(j1.dn, 0.925825898328683256) < 1e-13);

    const auto j2 = elliptic::jacobi(2.5, Modulus::from_parameter_pair(0.81, 0.19));
    CHECK(rel(j2.sn, 0.995368815751094296) < 1e-12);
    CHECK(rel(j2.cn, -0.0961297073243443125) < 1e-11);
    CHECK(rel(j2.dn, 0.444393008170148718) < 1e-12);

    const auto j3 = elliptic::jacobi(1.3, Modulus::from_parameter_pair(0.999999999, 1e-9));
    CHECK(rel(j3.sn, 0.861723159445071373) < 1e-12);
    CHECK(rel(j3.cn, 0.507378750516814707) < 1e-12);
    CHECK(rel(j3.dn, 0.507378751248582426) < 1e-12);

    const auto j4 = elliptic::jacobi(0.4, Modulus::from_parameter_pair(1e-12, 1.0 - 1e-12));
    CHECK(rel(j4.sn, 0.389418342308640997) < 1e-13);
    CHECK(rel(j4.cn, 0.921060994002889097) < 1e-13);
    CHECK(rel(j4.dn, 0.999999999999924177) < 1e-14);
}

TEST_CASE("jacobi identities hold over random arguments", "[elliptic]") {
    std::mt19937 rng(20260822);
    std::uniform_real_distribution<double> um(1e-6, 1.0 - 1e-6);
    std::uniform_real_distribution<double> uu(-30.0, 30.0);
    for (int i = 0; i < 10000; ++i) {
        const double m = um(rng);
        const double u = uu(rng);
        const auto mod = Modulus::from_parameter_pair(m, 1.0 - m);
        const auto j = elliptic::jacobi(u, mod);
        CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) < 1e-13);
        CHECK(std::abs(j.dn * j.dn + m * j.sn * j.sn - 1.0) < 1e-13);
        CHECK(std::abs(j.sn) <= 1.0 + 1e-14);
        CHECK(j.dn > 0.0);
    }
}

TEST_CASE("jacobi periodicity and symmetry", "[elliptic]") {
    for (const double m : {0.2, 0.5, 0.93}) {
        const auto mod = Modulus::from_parameter_pair(m, 1.0 - m);
        const double K = elliptic::complete_K(mod);
        for (const double u : {0.3, 1.1, 2.7}) {
            const auto j0 = elliptic::jacobi(u, mod);
            const auto j4 = elliptic::jacobi(u + 4.0 * K, mod);
            CHECK(std::abs(j0.sn - j4.sn) < 1e-12);
            CHECK(std::abs(j0.cn - j4.cn) < 1e-12);
            CHECK(std::abs(j0.dn - j4.dn) < 1e-12);
            const auto j2 = elliptic::jacobi(u + 2.0 * K, mod);
            CHECK(std::abs(j0.sn + j2.sn) < 1e-12);
            CHECK(std::abs(j0.cn + j2.cn) < 1e-12);
            const auto jm = elliptic::jacobi(-u, mod);
            CHECK(std::abs(j0.sn + jm.sn) < 1e-14);
            CHECK(std::abs(j0.cn - jm.cn) < 1e-14);
        }
        // Quarter-period values.
        const auto jk = elliptic::jacobi(K, mod);
        CHECK(std::abs(jk.sn - 1.0) < 1e-13);
        CHECK(std::abs(jk.cn) < 1e-13);
        CHECK(rel(jk.dn, std::sqrt(1.0 - m)) < 1e-12);
    }
}

TEST_CASE("jacobi derivative structure", "[elliptic]") {
    const double h = 1e-6;
    for (const double m : {0.15, 0.6, 0.97}) {
        const auto mod = Modulus::from_parameter_pair(m, 1.0 - m);
        for (const double u : {0.4, 1.3, 2.2}) {
            const auto jc = elliptic::jacobi(u, mod);
            const auto jp = elliptic::jacobi(u + h, mod);
            const auto jm = elliptic::jacobi(u - h, mod);
            CHECK(std::abs((jp.sn - jm.sn) / (2.0 * h) - jc.cn * jc.dn) < 1e-9);
            CHECK(std::abs((jp.cn - jm.cn) / (2.0 * h) + jc.sn * jc.dn) < 1e-9);
            CHECK(std::abs((jp.dn - jm.dn) / (2.0 * h) + m * jc.sn * jc.cn) < 1e-9);
        }
    }
}

TEST_CASE("jacobi limit branches join smoothly", "[elliptic]") {
    // Across the trigonometric-series boundary in m.
    for (const double u : {0.35, 1.7}) {
        const auto lo = elliptic::jacobi(u, Modulus::from_parameter_pair(0.999e-8, 1.0 - 0.999e-8));
        const auto hi = elliptic::jacobi(u, Modulus::from_parameter_pair(1.001e-8, 1.0 - 1.001e-8));
        CHECK(std::abs(lo.sn - hi.sn) < 1e-10);
        CHECK(std::abs(lo.cn - hi.cn) < 1e-10);
        CHECK(std::abs(lo.dn - hi.dn) < 1e-10);
    }
    // Across the hyperbolic-series boundary in 1 - m.
    for (const double u : {0.6, 3.2}) {
        const auto lo = elliptic::jacobi(u, Modulus::from_p_bar_sq(0.999e-8));
        const auto hi = elliptic::jacobi(u, Modulus::from_p_bar_sq(1.001e-8));
        CHECK(std::abs(lo.sn - hi.sn) < 1e-10);
        CHECK(std::abs(lo.cn - hi.cn) < 1e-10);
        CHECK(std::abs(lo.dn - hi.dn) < 1e-10);
    }
    // Exact degenerate limits.
    const auto tanh_case = elliptic::jacobi(1.1, Modulus::from_parameter_pair(1.0, 0.0));
    CHECK(rel(tanh_case.sn, std::tanh(1.1)) < 1e-15);
    CHECK(rel(tanh_case.cn, 1.0 / std::cosh(1.1)) < 1e-15);
    CHECK(rel(tanh_case.dn, 1.0 / std::cosh(1.1)) < 1e-15);
    const auto trig_case = elliptic::jacobi(1.1, Modulus::from_parameter_pair(0.0, 1.0));
    CHECK(rel(trig_case.sn, std::sin(1.1)) < 1e-15);
    CHECK(rel(trig_case.cn, std::cos(1.1)) < 1e-15);
    CHECK(trig_case.dn == 1.0);
}

TEST_CASE("modulus factories avoid complement cancellation", "[elliptic]") {
    const auto m1 = Modulus::from_p(0.6);
    CHECK(rel(m1.p_bar_sq, 0.64) < 1e-15);
    CHECK(rel(m1.m(), 0.36) < 1e-15);
    // Complement supplied directly survives where 1 - p^2 would round to zero.
    const auto m2 = Modulus::from_p_bar_sq(1e-30);
    CHECK(m2.p_bar_sq == 1e-30);
    CHECK(m2.p == 1.0);
    const auto m3 = Modulus::from_parameter_pair(1.0 - 1e-17, 1e-17);
    CHECK(m3.p_bar_sq == 1e-17);
}
