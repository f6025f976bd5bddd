#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cubictunnel/classical.hpp"
#include "cubictunnel/constants.hpp"
#include "cubictunnel/errors.hpp"
#include "cubictunnel/fluctuation.hpp"
#include "cubictunnel/units.hpp"

namespace cubictunnel::rate {

// One evaluated temperature. gamma recomposes from the stored pieces:
//   hbar Gamma = sqrt(M N^-2 / (2 pi)) * |det_ratio|^(-1/2) * exp(-action).
struct RatePoint {
    double T_star = 0.0;          // Kelvin
    double kappa = 0.0;           // energy parameter of the underlying orbit
    double action = 0.0;          // A / hbar
    double thermal_action = 0.0;  // V(a) / (k_B T*)
    double norm_sq = 0.0;         // N^-2, Angstrom^2 meV
    double det_ratio = 0.0;       // rate-kernel Det^R / Det^h, meV^-2 (negative)
    double gamma = 0.0;           // hbar Gamma, meV (0 exactly at T* = T_c*)
    double log_gamma = 0.0;       // log(hbar Gamma / meV), finite through underflow
    double arrhenius = 0.0;       // classical hbar Gamma, meV
    bool underflow = false;       // gamma fell below double range
};

struct RateCurve {
    units::PotentialParams params;
    std::vector<RatePoint> points; // ascending in T_star
    double T_peak = 0.0;           // refined location of the rate maximum, Kelvin
    double gamma_peak = 0.0;       // hbar Gamma at T_peak, meV
    double T_arrhenius =
        std::numeric_limits<double>::quiet_NaN(); // gamma = arrhenius crossing, Kelvin
    double fitted_exponent =
        std::numeric_limits<double>::quiet_NaN(); // d log gamma / d log(T_c - T) near T_c
    std::vector<std::string> warnings;
};

// Classical activation rate with the conventional attempt prefactor hbar omega / 2 pi.
inline double arrhenius_rate(double t_star, const units::PotentialParams& params,
                             double prefactor_mev) {
    if (!(t_star > 0.0)) {
        throw ParameterDomainError("arrhenius_rate: temperature must be positive");
    }
    return prefactor_mev * std::exp(-classical::thermal_action(t_star, params));
}

inline double arrhenius_rate(double t_star, const units::PotentialParams& params) {
    return arrhenius_rate(t_star, params, params.hbar_omega / (2.0 * constants::pi));
}

namespace detail {

// The determinant convention entering the rate. Differentiating only the
// complete-elliptic-integral factor K(q) of the period, holding the
// sqrt(chi1 - chi3) time-rescaling fixed, gives a kernel whose small-modulus law
// Det ~ p^2 matches the vanishing zero-mode volume, so the rate closes to zero
// at the crossover instead of jumping.
inline constexpr auto rate_kernel = fluctuation::PeriodDerivative::modulus_only;

inline double log_gamma_from_state(const classical::BounceState& st,
                                   const units::PotentialParams& params, double nsq,
                                   double action) {
    const double log_ratio_abs = fluctuation::det_regularized_log(st, params, rate_kernel) -
                                 fluctuation::det_harmonic_log(st.L, params);
    return 0.5 * std::log(params.mass_internal * nsq / (2.0 * constants::pi)) -
           0.5 * log_ratio_abs - action;
}

} // namespace detail

// Decay rate at one temperature in (0, T_c*]. At the crossover itself the orbit
// degenerates to the saddle and the rate closes to exactly zero.
inline RatePoint decay_rate(double t_star, const units::PotentialParams& params) {
    if (!(t_star > 0.0)) {
        throw ParameterDomainError("decay_rate: temperature must be positive");
    }
    const double tc = params.t_crossover;
    if (t_star > tc * (1.0 + 1e-12)) {
        throw QuantumRegimeError("decay_rate: T* above the crossover temperature");
    }
    RatePoint pt;
    pt.T_star = t_star;
    pt.thermal_action = classical::thermal_action(t_star, params);
    pt.arrhenius = arrhenius_rate(t_star, params);
    if (t_star >= tc * (1.0 - 1e-13)) {
        const auto st = classical::bounce_state(classical::kappa_min, params);
        pt.T_star = st.T_star;
        pt.kappa = st.kappa;
        pt.action = classical::classical_action(st, params);
        pt.norm_sq = 0.0;
        pt.det_ratio = 0.0;
        pt.gamma = 0.0;
        pt.log_gamma = -std::numeric_limits<double>::infinity();
        return pt;
    }
    const auto st = classical::invert_temperature(t_star, params);
    pt.kappa = st.kappa;
    pt.action = classical::classical_action(st, params);
    pt.norm_sq = classical::norm_squared(st, params);
    pt.det_ratio = fluctuation::det_ratio(st, params, detail::rate_kernel);
    pt.log_gamma = detail::log_gamma_from_state(st, params, pt.norm_sq, pt.action);
    pt.gamma = std::exp(pt.log_gamma);
    if (pt.gamma == 0.0 && std::isfinite(pt.log_gamma)) {
        pt.underflow = true;
    }
    return pt;
}

// Least-squares slope of log gamma against log(T_c - T) over the window
// T >= T_c (1 - window). Needs at least 20 usable points.
inline double fit_crossover_exponent(const std::vector<RatePoint>& points,
                                     const units::PotentialParams& params,
                                     double window = 0.02) {
    if (!(window > 0.0 && window < 1.0)) {
        throw ParameterDomainError("fit_crossover_exponent: window must lie in (0, 1)");
    }
    const double tc = params.t_crossover;
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        const double u = tc - p.T_star;
        if (u > tc * 1e-13 && p.T_star >= tc * (1.0 - window) && std::isfinite(p.log_gamma)) {
            xs.push_back(std::log(u));
            ys.push_back(p.log_gamma);
        }
    }
    if (xs.size() < 20) {
        throw FitError("fit_crossover_exponent: fewer than 20 points in the fit window");
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw FitError("fit_crossover_exponent: degenerate abscissa");
    }
    return sxy / sxx;
}

// Default scan grid: 400 log-spaced temperatures across [T_c/100, T_c(1 - 1e-4)]
// plus 64 points log-spaced in 1 - T/T_c over [1e-4, 0.05] so the crossover
// window always holds enough points for the exponent fit.
inline std::vector<double> default_temperature_grid(const units::PotentialParams& params) {
    const double tc = params.t_crossover;
    std::vector<double> grid;
    grid.reserve(464);
    const double lo = std::log(0.01 * tc);
    const double hi = std::log(tc * (1.0 - 1e-4));
    for (int i = 0; i < 400; ++i) {
        grid.push_back(std::exp(lo + (hi - lo) * i / 399.0));
    }
    const double ulo = std::log(1e-4);
    const double uhi = std::log(0.05);
    for (int i = 0; i < 64; ++i) {
        grid.push_back(tc * (1.0 - std::exp(uhi + (ulo - uhi) * i / 63.0)));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace detail {

inline double log_gamma_at(double t, const units::PotentialParams& params) {
    return decay_rate(t, params).log_gamma;
}

// Golden-section maximum of log gamma on [lo, hi].
inline double refine_peak(double lo, double hi, const units::PotentialParams& params) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = log_gamma_at(c, params);
    double fd = log_gamma_at(d, params);
    const double tol = 1e-9 * params.t_crossover;
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = log_gamma_at(c, params);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = log_gamma_at(d, params);
        }
    }
    return 0.5 * (a + b);
}

inline double log_arrhenius_at(double t, const units::PotentialParams& params) {
    return std::log(params.hbar_omega / (2.0 * constants::pi)) -
           classical::thermal_action(t, params);
}

// Bisect log gamma = log arrhenius in y = log(1 - T/T_c); returns NaN when the
// two rates do not cross between the peak and the crossover.
inline double find_arrhenius_crossing(double t_peak, const units::PotentialParams& params) {
    const double tc = params.t_crossover;
    const auto g = [&](double y) {
        const double t = tc * (1.0 - std::exp(y));
        return log_gamma_at(t, params) - log_arrhenius_at(t, params);
    };
    double y_lo = std::log(1.0 - t_peak / tc); // g > 0 expected here
    double y_hi = std::log(1e-12);             // g < 0 expected here
    double g_lo = g(y_lo);
    double g_hi = g(y_hi);
    if (!(g_lo > 0.0) || !(g_hi < 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    for (int i = 0; i < 120 && y_lo - y_hi > 1e-14 * std::abs(y_hi) + 1e-15; ++i) {
        const double y = 0.5 * (y_lo + y_hi);
        if (g(y) > 0.0) {
            y_lo = y;
        } else {
            y_hi = y;
        }
    }
    return tc * (1.0 - std::exp(0.5 * (y_lo + y_hi)));
}

} // namespace detail

// Evaluate the rate over a temperature grid and extract the curve features:
// the interior maximum T_P (golden-section refined), the Arrhenius crossing T_A,
// the near-crossover power-law exponent, and semiclassical validity warnings.
inline RateCurve scan(const units::PotentialParams& params, std::vector<double> grid) {
    if (grid.empty()) {
        throw ParameterDomainError("scan: temperature grid is empty");
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    RateCurve curve;
    curve.params = params;
    curve.points.reserve(grid.size());
    for (const double t : grid) {
        curve.points.push_back(decay_rate(t, params));
    }

    std::size_t imax = 0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].log_gamma > curve.points[imax].log_gamma) {
            imax = i;
        }
    }
    if (imax > 0 && imax + 1 < curve.points.size()) {
        curve.T_peak = detail::refine_peak(curve.points[imax - 1].T_star,
                                           curve.points[imax + 1].T_star, params);
    } else {
        curve.T_peak = curve.points[imax].T_star;
    }
    curve.gamma_peak = decay_rate(curve.T_peak, params).gamma;
    curve.T_arrhenius = detail::find_arrhenius_crossing(curve.T_peak, params);

    try {
        curve.fitted_exponent = fit_crossover_exponent(curve.points, params);
    } catch (const FitError&) {
        // Sparse grids simply do not report an exponent.
    }

    std::ostringstream warn;
    if (params.action_scale <= 1.0) {
        warn.str("");
        warn << "semiclassical validity: zero-temperature action A/hbar = "
             << params.action_scale << " <= 1";
        curve.warnings.push_back(warn.str());
    }
    if (curve.gamma_peak / params.hbar_omega >= 1.0) {
        warn.str("");
        warn << "semiclassical validity: hbar*Gamma(T_P)/(hbar*omega) = "
             << curve.gamma_peak / params.hbar_omega << " >= 1";
        curve.warnings.push_back(warn.str());
    }
    return curve;
}

inline RateCurve scan(const units::PotentialParams& params) {
    return scan(params, default_temperature_grid(params));
}

} // namespace cubictunnel::rate
