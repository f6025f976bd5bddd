#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cubictunnel/classical.hpp"
#include "cubictunnel/constants.hpp"
#include "cubictunnel/errors.hpp"
#include "cubictunnel/fluctuation.hpp"
#include "cubictunnel/quadrature.hpp"
#include "cubictunnel/units.hpp"

namespace cubictunnel::oracle {

// One independently recomputed quantity. For rows whose analytic value is
// exactly zero the discrepancy is the absolute residual |numeric| (the quantity
// itself is pre-normalized); otherwise it is relative with a 1e-300 floor.
struct OracleReport {
    std::string quantity;
    double analytic = 0.0;
    double numeric = 0.0;
    double discrepancy = 0.0;
    double threshold = 0.0;
    double rtol = 0.0;
    long steps = 0;
    bool converged = true;

    bool pass() const { return converged && discrepancy <= threshold; }
};

inline double discrepancy_of(double analytic, double numeric) {
    if (analytic == 0.0) {
        return std::abs(numeric);
    }
    return std::abs(analytic - numeric) / std::max(std::abs(analytic), 1e-300);
}

namespace detail {

// Embedded Dormand-Prince 5(4) pair with a standard step controller. Small and
// self-contained on purpose: the oracle must not share numerical machinery with
// the closed forms it checks.
template <std::size_t N>
struct IntegrationStats {
    std::array<double, N> y{};
    long steps = 0;
    bool ok = true;
};

template <std::size_t N, class F>
IntegrationStats<N> integrate(const F& f, std::array<double, N> y, double t0, double t1,
                              double rtol, double atol) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                     b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                     e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

    IntegrationStats<N> out;
    if (t1 <= t0) {
        out.y = y;
        return out;
    }
    double t = t0;
    double h = (t1 - t0) * 1e-3;
    const double h_floor = 1e4 * std::numeric_limits<double>::epsilon() * (t1 - t0);
    std::array<double, N> k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
    long rejected_in_a_row = 0;
    while (t < t1 && out.steps < 2000000) {
        if (h > t1 - t) {
            h = t1 - t;
        }
        f(t, y, k1);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] +
                    h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5, k7);

        double errsq = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            errsq += (e / scale) * (e / scale);
        }
        const double errnorm = std::sqrt(errsq / static_cast<double>(N));
        ++out.steps;
        if (errnorm <= 1.0 || h <= h_floor || rejected_in_a_row > 30) {
            if (errnorm > 1.0) {
                out.ok = false; // tolerance unattainable at this step size
            }
            t += h;
            y = y5;
            rejected_in_a_row = 0;
        } else {
            ++rejected_in_a_row;
        }
        const double fac =
            errnorm > 0.0 ? std::clamp(0.9 * std::pow(errnorm, -0.2), 0.2, 5.0) : 5.0;
        h = std::max(h * fac, h_floor);
    }
    if (t < t1) {
        out.ok = false;
    }
    out.y = y;
    return out;
}

inline std::string fraction_label(double kappa) {
    // Stable labels for the standard probe energies; generic fallback otherwise.
    const double r = kappa * 27.0;
    for (double k : {1.0, 2.0, 3.0}) {
        if (std::abs(r + k) < 1e-12) {
            return "kappa=-" + std::to_string(static_cast<int>(k)) + "/27";
        }
    }
    if (std::abs(r + 3.9) < 1e-12) {
        return "kappa=-3.9/27";
    }
    return "kappa=" + std::to_string(kappa);
}

} // namespace detail

struct ShootingOracle {
    std::vector<double> tau;
    std::vector<double> x_numeric;
    std::vector<double> x_closed;
    std::vector<double> v_numeric;
    std::vector<OracleReport> reports;
};

// Integrate the equation of motion x'' = omega^2 x (1 - x/a) from the outer
// turning point over half a period and compare against the closed trajectory.
inline ShootingOracle shoot_bounce(double kappa, const units::PotentialParams& params,
                                   double rtol = 1e-10) {
    if (!(kappa > classical::kappa_min && kappa < 0.0)) {
        throw ParameterDomainError("shoot_bounce: kappa must lie strictly inside (-4/27, 0)");
    }
    const auto st = classical::bounce_state(kappa, params);
    const double omega2 = params.hbar_omega * params.hbar_omega;
    const double a = params.a;
    const auto eom = [&](double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = omega2 * y[0] * (1.0 - y[0] / a);
    };

    ShootingOracle res;
    const int nseg = 128;
    std::array<double, 2> y = {1.5 * a * st.chi1, 0.0};
    res.tau.push_back(0.0);
    res.x_numeric.push_back(y[0]);
    res.x_closed.push_back(classical::bounce(0.0, 0.0, st, params));
    res.v_numeric.push_back(y[1]);

    const double atol = rtol * 1e-3 * a;
    long steps = 0;
    bool ok = true;
    double worst_dev = 0.0;
    double worst_energy = st.energy;
    const double gamma = params.gamma;
    const double mref = params.mass_internal;
    const auto energy_of = [&](const std::array<double, 2>& yy) {
        // Euclidean first integral: (M/2) v^2 - (M omega^2 / 2) x^2 + (gamma/3) x^3.
        return 0.5 * mref * yy[1] * yy[1] -
               0.5 * mref * omega2 * yy[0] * yy[0] + gamma / 3.0 * yy[0] * yy[0] * yy[0];
    };
    for (int i = 1; i <= nseg; ++i) {
        const double t0 = 0.5 * st.L * (i - 1) / nseg;
        const double t1 = 0.5 * st.L * i / nseg;
        const auto stats = detail::integrate<2>(eom, y, t0, t1, rtol, atol);
        y = stats.y;
        steps += stats.steps;
        ok = ok && stats.ok;
        const double xc = classical::bounce(t1, 0.0, st, params);
        res.tau.push_back(t1);
        res.x_numeric.push_back(y[0]);
        res.x_closed.push_back(xc);
        res.v_numeric.push_back(y[1]);
        worst_dev = std::max(worst_dev, std::abs(y[0] - xc));
        const double en = energy_of(y);
        if (std::abs(en - st.energy) > std::abs(worst_energy - st.energy)) {
            worst_energy = en;
        }
    }

    OracleReport traj;
    traj.quantity = "bounce max deviation / a";
    traj.analytic = 0.0;
    traj.numeric = worst_dev / a;
    traj.discrepancy = discrepancy_of(traj.analytic, traj.numeric);
    traj.threshold = 1e-8;
    traj.rtol = rtol;
    traj.steps = steps;
    traj.converged = ok;
    res.reports.push_back(traj);

    OracleReport endv;
    endv.quantity = "bounce endpoint speed / (a omega)";
    endv.analytic = 0.0;
    endv.numeric = std::abs(y[1]) / (a * params.hbar_omega);
    endv.discrepancy = discrepancy_of(endv.analytic, endv.numeric);
    endv.threshold = 1e-8;
    endv.rtol = rtol;
    endv.steps = steps;
    endv.converged = ok;
    res.reports.push_back(endv);

    OracleReport energy;
    energy.quantity = "bounce energy first integral";
    energy.analytic = st.energy;
    energy.numeric = worst_energy;
    energy.discrepancy = discrepancy_of(energy.analytic, energy.numeric);
    energy.threshold = 1e-8;
    energy.rtol = rtol;
    energy.steps = steps;
    energy.converged = ok;
    res.reports.push_back(energy);
    return res;
}

// Recompute the period as a turning-point quadrature (after the standard angular
// substitution) with 64-point Gauss-Legendre, bypassing the AGM entirely.
inline OracleReport period_quadrature(double kappa, const units::PotentialParams& params) {
    if (!(kappa > classical::kappa_min && kappa < 0.0)) {
        throw ParameterDomainError("period_quadrature: kappa must lie strictly inside (-4/27, 0)");
    }
    const auto st = classical::bounce_state(kappa, params);
    const double m = st.m;
    const auto integrand = [&](double phi) {
        const double c = std::cos(phi);
        return 1.0 / std::sqrt(1.0 - m * c * c);
    };
    const double quad = quadrature::integrate(integrand, 0.0, 0.5 * constants::pi, 64);
    OracleReport rep;
    rep.quantity = "bounce period";
    rep.analytic = st.L;
    rep.numeric = 4.0 * quad / (params.hbar_omega * std::sqrt(st.X));
    rep.discrepancy = discrepancy_of(rep.analytic, rep.numeric);
    rep.threshold = 1e-9;
    rep.rtol = 0.0;
    rep.steps = 64;
    rep.converged = true;
    return rep;
}

// Monodromy check of the fluctuation determinant. The 2x2 transfer matrix M(s) of
// -f'' + (V''(x_cl)/M) f = -s f is accumulated over one period; D(s) = det(M - 1)
// vanishes at s = 0 (zero mode) and D'(0) recovers the regularized determinant.
// The measured D(0), analytically zero, is subtracted before dividing by the
// shift so the estimate is immune to the integrator's common bias.
inline std::vector<OracleReport> monodromy_reports(double kappa,
                                                   const units::PotentialParams& params,
                                                   double rtol = 1e-13) {
    if (!(kappa > classical::kappa_min && kappa < 0.0)) {
        throw ParameterDomainError("monodromy_reports: kappa must lie strictly inside (-4/27, 0)");
    }
    const auto st = classical::bounce_state(kappa, params);
    const double omega2 = params.hbar_omega * params.hbar_omega;
    const double a = params.a;
    const double x0 = 1.5 * a * st.chi1;

    long steps = 0;
    bool ok = true;
    const auto transfer_det = [&](double shift, bool harmonic) {
        // y = [x, v, f, f', g, g']; starting the orbit at x = 0 freezes the
        // potential curvature at its harmonic value.
        const auto rhs = [&](double, const std::array<double, 6>& y,
                             std::array<double, 6>& dy) {
            dy[0] = y[1];
            dy[1] = omega2 * y[0] * (1.0 - y[0] / a);
            const double u = omega2 * (1.0 - 2.0 * y[0] / a) - shift;
            dy[2] = y[3];
            dy[3] = u * y[2];
            dy[4] = y[5];
            dy[5] = u * y[4];
        };
        std::array<double, 6> y = {harmonic ? 0.0 : x0, 0.0, 1.0, 0.0, 0.0, 1.0};
        const auto stats = detail::integrate<6>(rhs, y, 0.0, st.L, rtol, rtol * 1e-2);
        steps += stats.steps;
        ok = ok && stats.ok;
        // det(M - 1) = 2 - tr M for a unit-determinant transfer matrix.
        return 2.0 - (stats.y[2] + stats.y[5]);
    };

    const double c = 2.5e-5 * omega2;
    const double d0 = transfer_det(0.0, false);
    const double g4 = (transfer_det(4.0 * c, false) - d0) / (4.0 * c);
    const double g2 = (transfer_det(2.0 * c, false) - d0) / (2.0 * c);
    const double g1 = (transfer_det(c, false) - d0) / c;
    const double r_quad = g4 / 3.0 - 2.0 * g2 + (8.0 / 3.0) * g1;
    const double r_lin = 2.0 * g1 - g2;
    const bool extrapolation_ok = std::abs(r_quad - r_lin) <= 1e-4 * std::abs(r_quad);

    const double dh_numeric = transfer_det(0.0, true);
    const double dh_analytic = fluctuation::det_harmonic(st.L, params);

    std::vector<OracleReport> reports;

    OracleReport zero;
    zero.quantity = "zero-shift transfer determinant";
    zero.analytic = 0.0;
    zero.numeric = d0;
    zero.discrepancy = discrepancy_of(zero.analytic, zero.numeric);
    zero.threshold = 1e-8;
    zero.rtol = rtol;
    zero.steps = steps;
    zero.converged = ok;
    reports.push_back(zero);

    OracleReport harm;
    harm.quantity = "harmonic transfer determinant";
    harm.analytic = dh_analytic;
    harm.numeric = dh_numeric;
    harm.discrepancy = discrepancy_of(harm.analytic, harm.numeric);
    harm.threshold = 1e-10;
    harm.rtol = rtol;
    harm.steps = steps;
    harm.converged = ok;
    reports.push_back(harm);

    OracleReport ratio;
    ratio.quantity = "regularized determinant ratio";
    ratio.analytic = fluctuation::det_ratio(st, params, fluctuation::PeriodDerivative::total);
    ratio.numeric = r_quad / dh_numeric;
    ratio.discrepancy = discrepancy_of(ratio.analytic, ratio.numeric);
    ratio.threshold = 1e-5;
    ratio.rtol = rtol;
    ratio.steps = steps;
    ratio.converged = ok && extrapolation_ok;
    reports.push_back(ratio);

    return reports;
}

// Full cross-check over the standard probe energies.
inline std::vector<OracleReport> verify_all(const units::PotentialParams& params,
                                            double rtol_shoot = 1e-10,
                                            double rtol_monodromy = 1e-13) {
    std::vector<OracleReport> all;
    for (const double kappa :
         {-1.0 / 27.0, -2.0 / 27.0, -3.0 / 27.0, -3.9 / 27.0}) {
        const std::string tag = detail::fraction_label(kappa) + " ";
        auto shoot = shoot_bounce(kappa, params, rtol_shoot);
        for (auto& r : shoot.reports) {
            r.quantity = tag + r.quantity;
            all.push_back(r);
        }
        auto period = period_quadrature(kappa, params);
        period.quantity = tag + period.quantity;
        all.push_back(period);
        for (auto& r : monodromy_reports(kappa, params, rtol_monodromy)) {
            r.quantity = tag + r.quantity;
            all.push_back(r);
        }
    }
    return all;
}

} // namespace cubictunnel::oracle
