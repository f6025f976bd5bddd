#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubictunnel/constants.hpp"
#include "cubictunnel/elliptic.hpp"
#include "cubictunnel/errors.hpp"
#include "cubictunnel/quadrature.hpp"
#include "cubictunnel/units.hpp"

namespace cubictunnel::classical {

// Dimensionless energy parameter kappa = 4 E / (27 V(a)) runs over [-4/27, 0]:
// kappa = 0 is the zero-energy orbit (infinite period), kappa = -4/27 the static
// saddle at the inverted-potential minimum.
inline constexpr double kappa_min = -4.0 / 27.0;

// Everything determined by one classical energy. kappa is the canonical internal
// parameter; energy and temperature are views of it. Immutable once built.
struct BounceState {
    double kappa = 0.0;  // 4E / (27 V(a))
    double energy = 0.0; // E = 27 V(a) kappa / 4, meV (non-positive)
    double theta = 0.0;  // (1/3) arccos(27 kappa / 2 + 1)
    double chi1 = 0.0;   // turning points, chi1 >= chi2 >= chi3,
    double chi2 = 0.0;   // each a root of -chi^3 + chi^2 + kappa = 0
    double chi3 = 0.0;
    elliptic::Modulus p;     // p^2 = (chi1 - chi2) / (chi1 - chi3)
    double omega_bar = 0.0;  // sqrt(chi1 - chi3) * omega / 2, meV
    double L = 0.0;          // oscillation period, hbar / meV (infinite at kappa = 0)
    double T_star = 0.0;     // Kelvin; L * k_B * T_star = hbar by construction

    // Derived internals kept to avoid re-deriving cancellation-free combinations.
    double X = 0.0;            // chi1 - chi3
    double m = 0.0;            // p^2 = (chi1 - chi2) / X, no cancellation
    double mb = 0.0;           // 1 - p^2 = (chi2 - chi3) / X, no cancellation
    double log_pbar_sq = 0.0;  // log(mb); stays exact when mb underflows
    double Kc = 0.0;           // complete elliptic integral K(p) (infinite at kappa = 0)
    double Ec = 0.0;           // complete elliptic integral E(p)
    bool deep = false;         // built in the asymptotic kappa -> 0 tail
};

namespace detail {

struct Roots {
    double chi1, chi2, chi3;
};

// Trigonometric closed form for the three real roots, plus guarded Newton polish.
// The polish step repairs the arccos precision loss near the edges of the interval.
inline Roots roots_trig(double kappa) {
    const double arg = std::clamp(27.0 * kappa / 2.0 + 1.0, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    const double third = 1.0 / 3.0;
    const double two_thirds_pi = 2.0 * constants::pi / 3.0;
    Roots r;
    r.chi1 = third + 2.0 * third * std::cos(theta);
    r.chi2 = third + 2.0 * third * std::cos(theta - two_thirds_pi);
    r.chi3 = third + 2.0 * third * std::cos(theta - 2.0 * two_thirds_pi);
    for (double* chi : {&r.chi1, &r.chi2, &r.chi3}) {
        double x = *chi;
        double res = x * x * (1.0 - x) + kappa;
        for (int i = 0; i < 3; ++i) {
            const double slope = x * (2.0 - 3.0 * x);
            if (slope == 0.0) {
                break;
            }
            const double xn = x - res / slope;
            const double resn = xn * xn * (1.0 - xn) + kappa;
            if (!(std::abs(resn) < std::abs(res))) {
                break;
            }
            x = xn;
            res = resn;
        }
        *chi = x;
    }
    return r;
}

// Series roots for kappa -> 0^- in s = sqrt(-kappa); accurate to O(s^5) which is
// far below double rounding for |kappa| < 1e-8. The trigonometric form loses the
// two small roots entirely in this regime.
inline Roots roots_near_zero(double kappa) {
    const double s = std::sqrt(-kappa);
    Roots r;
    r.chi1 = 1.0 + kappa - 2.0 * kappa * kappa;
    r.chi2 = s + s * s * (0.5 + s * (0.625 + s));
    r.chi3 = -s + s * s * (0.5 - s * (0.625 - s));
    return r;
}

// Series roots near the saddle in delta = sqrt(kappa + 4/27); the root pair
// chi1, chi2 collides there and the trigonometric form loses their split.
inline Roots roots_near_saddle(double zeta) {
    const double delta = std::sqrt(zeta);
    Roots r;
    r.chi1 = 2.0 / 3.0 + delta - 0.5 * zeta;
    r.chi2 = 2.0 / 3.0 - delta - 0.5 * zeta;
    r.chi3 = -1.0 / 3.0 + zeta;
    return r;
}

inline constexpr double series_zero_threshold = 1e-8;   // on |kappa|
inline constexpr double series_saddle_threshold = 1e-10; // on kappa + 4/27

} // namespace detail

// Build the full classical state for kappa in [-4/27, 0].
inline BounceState bounce_state(double kappa, const units::PotentialParams& params) {
    if (!(kappa >= kappa_min - 1e-15 && kappa <= 0.0)) {
        throw ParameterDomainError("bounce_state: kappa must lie in [-4/27, 0]");
    }
    kappa = std::clamp(kappa, kappa_min, 0.0);
    const double omega = params.hbar_omega;
    const double kB = constants::boltzmann_mev_per_kelvin;

    BounceState s;
    s.kappa = kappa;
    s.energy = 27.0 * params.barrier_height * kappa / 4.0;
    s.theta = std::acos(std::clamp(27.0 * kappa / 2.0 + 1.0, -1.0, 1.0)) / 3.0;

    if (kappa == kappa_min) {
        // Static saddle: exact substitution, no elliptic evaluations.
        s.chi1 = 2.0 / 3.0;
        s.chi2 = 2.0 / 3.0;
        s.chi3 = -1.0 / 3.0;
        s.X = 1.0;
        s.m = 0.0;
        s.mb = 1.0;
        s.log_pbar_sq = 0.0;
        s.p = elliptic::Modulus::from_parameter_pair(0.0, 1.0);
        s.omega_bar = 0.5 * omega;
        s.Kc = 0.5 * constants::pi;
        s.Ec = 0.5 * constants::pi;
        s.L = 2.0 * constants::pi / omega;
        s.T_star = 1.0 / (kB * s.L);
        return s;
    }

    detail::Roots r;
    const double zeta = kappa - kappa_min;
    if (kappa > -detail::series_zero_threshold) {
        r = detail::roots_near_zero(kappa);
    } else if (zeta < detail::series_saddle_threshold) {
        r = detail::roots_near_saddle(zeta);
    } else {
        r = detail::roots_trig(kappa);
    }
    s.chi1 = r.chi1;
    s.chi2 = r.chi2;
    s.chi3 = r.chi3;
    s.X = s.chi1 - s.chi3;
    s.m = (s.chi1 - s.chi2) / s.X;
    s.mb = (s.chi2 - s.chi3) / s.X;
    s.p = elliptic::Modulus::from_parameter_pair(std::clamp(s.m, 0.0, 1.0),
                                                 std::clamp(s.mb, 0.0, 1.0));
    s.omega_bar = 0.5 * omega * std::sqrt(s.X);

    if (kappa == 0.0) {
        // Zero-energy orbit: period and K diverge; temperature is exactly zero.
        s.log_pbar_sq = -std::numeric_limits<double>::infinity();
        s.Kc = std::numeric_limits<double>::infinity();
        s.Ec = 1.0;
        s.L = std::numeric_limits<double>::infinity();
        s.T_star = 0.0;
        return s;
    }

    s.log_pbar_sq = std::log(s.mb);
    s.Kc = elliptic::complete_K(s.p);
    s.Ec = elliptic::complete_E(s.p);
    s.L = 4.0 * s.Kc / (omega * std::sqrt(s.X));
    s.T_star = 1.0 / (kB * s.L);
    return s;
}

// Bounce trajectory x_cl(tau) = (3a/2) [chi1 cn^2 + chi2 sn^2](varpi, p),
// varpi = omega_bar (tau - tau0). Time-reversal symmetric about tau0.
inline double bounce(double tau, double tau0, const BounceState& s,
                     const units::PotentialParams& params) {
    const auto j = elliptic::jacobi(s.omega_bar * (tau - tau0), s.p);
    return 1.5 * params.a * (s.chi1 * j.cn * j.cn + s.chi2 * j.sn * j.sn);
}

// Velocity along the bounce: (3a/2) F sn cn dn with F = -omega (chi1 - chi2) sqrt(X).
inline double bounce_velocity(double tau, double tau0, const BounceState& s,
                              const units::PotentialParams& params) {
    const auto j = elliptic::jacobi(s.omega_bar * (tau - tau0), s.p);
    const double F = -params.hbar_omega * (s.chi1 - s.chi2) * std::sqrt(s.X);
    return 1.5 * params.a * F * j.sn * j.cn * j.dn;
}

// Temperature view of the state: k_B T* = hbar omega sqrt(X) / (4 K(p)).
// Exactly zero at kappa = 0, where the period diverges.
inline double temperature(const BounceState& s) {
    return s.T_star;
}

namespace detail {

// Below this fraction of the crossover temperature the complementary modulus
// underflows double precision and the state is assembled analytically instead
// of by bisection in kappa.
inline constexpr double deep_tail_fraction = 0.02;

inline BounceState bounce_state_deep(double t_star, const units::PotentialParams& params) {
    const double omega = params.hbar_omega;
    const double kB = constants::boltzmann_mev_per_kelvin;
    // K sqrt(X) = omega / (4 k_B T); X - 1 is exponentially small here, so K
    // follows directly and mb = 16 exp(-2K) may underflow without harm because
    // log(mb) is carried exactly.
    const double K = omega / (4.0 * kB * t_star);
    const double log_mb = std::log(16.0) - 2.0 * K;
    const double mb = std::exp(log_mb);
    const double s_small = 0.5 * mb;
    BounceState s;
    s.deep = true;
    s.kappa = -(s_small * s_small);
    s.energy = 27.0 * params.barrier_height * s.kappa / 4.0;
    s.theta = 0.0;
    s.chi1 = 1.0 + s.kappa;
    s.chi2 = s_small;
    s.chi3 = -s_small;
    s.X = s.chi1 - s.chi3;
    s.m = 1.0 - mb;
    s.mb = mb;
    s.log_pbar_sq = log_mb;
    s.p = elliptic::Modulus{std::sqrt(s.m), mb};
    s.omega_bar = 0.5 * omega * std::sqrt(s.X);
    s.Kc = K;
    s.Ec = 1.0;
    s.L = 4.0 * K / (omega * std::sqrt(s.X));
    s.T_star = t_star;
    return s;
}

} // namespace detail

// Invert the temperature map. The period is strictly monotone in the energy, so a
// bisection in log(sqrt(-kappa)) converges for any T* in (0, T_c*].
inline BounceState invert_temperature(double t_star, const units::PotentialParams& params) {
    if (!(t_star > 0.0)) {
        throw ParameterDomainError("invert_temperature: temperature must be positive");
    }
    const double tc = params.t_crossover;
    if (t_star > tc * (1.0 + 1e-12)) {
        throw QuantumRegimeError("invert_temperature: T* above the crossover temperature");
    }
    if (t_star >= tc * (1.0 - 1e-13)) {
        return bounce_state(kappa_min, params);
    }
    if (t_star < detail::deep_tail_fraction * tc) {
        return detail::bounce_state_deep(t_star, params);
    }

    // y = log(s), s = sqrt(-kappa). Temperature increases monotonically with y.
    double y_lo = std::log(1e-80);
    double y_hi = 0.5 * std::log(-kappa_min - 1e-13);

    BounceState best;
    bool have_best = false;
    for (int i = 0; i < 240; ++i) {
        const double y = 0.5 * (y_lo + y_hi);
        const double sthis = std::exp(y);
        const BounceState st = bounce_state(-(sthis * sthis), params);
        if (!have_best || std::abs(st.T_star - t_star) < std::abs(best.T_star - t_star)) {
            best = st;
            have_best = true;
        }
        if (std::abs(st.T_star - t_star) <= 1e-13 * t_star) {
            return st;
        }
        if (st.T_star < t_star) {
            y_lo = y;
        } else {
            y_hi = y;
        }
        if (y_hi - y_lo < 1e-15 * std::abs(y_hi)) {
            break;
        }
    }
    return best;
}

// Squared norm of the zero mode, N^-2 = 2 int_0^{L/2} (dx_cl/dtau)^2 dtau
//   = 9 a^2 omega (chi1 - chi2)^2 sqrt(X) * int_0^K (sn cn dn)^2 dvarpi.
// Composite Gauss-Legendre quadrature, panel-refined to relative 1e-10.
inline double norm_squared(const BounceState& s, const units::PotentialParams& params) {
    if (s.m == 0.0) {
        return 0.0; // static saddle: the trajectory does not move
    }
    const double prefactor = 9.0 * params.a * params.a * params.hbar_omega *
                             (s.chi1 - s.chi2) * (s.chi1 - s.chi2) * std::sqrt(s.X);
    if (s.mb < 1e-20) {
        // Degenerate-modulus limit: int_0^inf (tanh' * tanh)^2 ... = 2/15 exactly,
        // with corrections of order mb log(1/mb).
        return prefactor * (2.0 / 15.0);
    }
    const auto integrand = [&](double w) {
        const auto j = elliptic::jacobi(w, s.p);
        const double f = j.sn * j.cn * j.dn;
        return f * f;
    };
    // Panels of width ~1.5 resolve the integrand scale even when K is large.
    int panels = std::max(4, static_cast<int>(std::ceil(s.Kc / 1.5)));
    double coarse = quadrature::integrate_panels(integrand, 0.0, s.Kc, panels, 16);
    double fine = quadrature::integrate_panels(integrand, 0.0, s.Kc, 2 * panels, 16);
    if (std::abs(fine - coarse) > 1e-11 * std::abs(fine)) {
        coarse = fine;
        fine = quadrature::integrate_panels(integrand, 0.0, s.Kc, 4 * panels, 16);
    }
    return prefactor * fine;
}

// Classical action over hbar: A/hbar = M N^-2 - E L. Positive and decreasing in T*.
inline double classical_action(const BounceState& s, const units::PotentialParams& params) {
    if (s.mb == 0.0) {
        // kappa = 0: E L -> 0 and M N^-2 -> (6/5) M omega a^2 = action_scale.
        return params.action_scale;
    }
    return params.mass_internal * norm_squared(s, params) - s.energy * s.L;
}

// Thermal (activation) action over hbar: A0/hbar = V(a) / (k_B T*).
inline double thermal_action(double t_star, const units::PotentialParams& params) {
    if (!(t_star > 0.0)) {
        throw ParameterDomainError("thermal_action: temperature must be positive");
    }
    return params.barrier_height / (constants::boltzmann_mev_per_kelvin * t_star);
}

} // namespace cubictunnel::classical
