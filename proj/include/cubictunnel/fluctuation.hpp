#pragma once

#include <cmath>
#include <limits>

#include "cubictunnel/classical.hpp"
#include "cubictunnel/constants.hpp"
#include "cubictunnel/elliptic.hpp"
#include "cubictunnel/errors.hpp"
#include "cubictunnel/units.hpp"

namespace cubictunnel::fluctuation {

// Sign-and-log representation for determinants whose magnitude leaves double
// range long before the physics degenerates.
struct LogSigned {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0; // -1, 0, +1

    static LogSigned from_value(double v) {
        if (v == 0.0) {
            return {-std::numeric_limits<double>::infinity(), 0};
        }
        return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
    }
    double value() const {
        return sign == 0 ? 0.0 : static_cast<double>(sign) * std::exp(log_abs);
    }
};

// Three lowest periodic fluctuation eigenvalues about the bounce. The operator
// -d^2/dtau^2 + V''(x_cl)/M reduces to a Lame equation with l = 3; its periodic
// band edges give eps_{-1} < eps_0 = 0 < eps_1.
struct LameSpectrum {
    double A_plus = 0.0;     // Lame characteristic of the eps_1 mode
    double A_minus = 0.0;    // Lame characteristic of the eps_{-1} mode
    double alpha1 = 0.0;     // 1 - 3 chi1
    double alpha2 = 0.0;     // (chi1 - chi3) / 4
    double eps_minus1 = 0.0; // negative (unstable) eigenvalue, meV^2
    double eps_0 = 0.0;      // zero mode, exactly 0
    double eps_1 = 0.0;      // lowest positive eigenvalue, meV^2
};

inline LameSpectrum lame_spectrum(const classical::BounceState& s,
                                  const units::PotentialParams& params) {
    const double w2 = params.hbar_omega * params.hbar_omega;
    LameSpectrum sp;
    // Endpoint substitution keeps the degenerate limits exact: the generic
    // expressions would otherwise pick up representation noise from chi = 2/3.
    if (s.m == 0.0) {
        sp.A_plus = -4.0;
        sp.A_minus = 0.0;
        sp.alpha1 = -1.0;
        sp.alpha2 = 0.25;
        sp.eps_minus1 = -w2;
        sp.eps_0 = 0.0;
        sp.eps_1 = 0.0;
        return sp;
    }
    if (s.mb == 0.0 || s.deep) {
        sp.A_plus = -11.0;
        sp.A_minus = -3.0;
        sp.alpha1 = -2.0;
        sp.alpha2 = 0.25;
        sp.eps_minus1 = -1.25 * w2;
        sp.eps_0 = 0.0;
        sp.eps_1 = 0.75 * w2;
        return sp;
    }
    const double m = s.m;
    const double rad = std::sqrt((4.0 * m - 1.0) * m + 1.0);
    sp.A_plus = -(2.0 + 5.0 * m) - 2.0 * rad;
    sp.A_minus = -(2.0 + 5.0 * m) + 2.0 * rad;
    sp.alpha1 = 1.0 - 3.0 * s.chi1;
    sp.alpha2 = 0.25 * s.X;
    sp.eps_1 = w2 * (sp.alpha1 - sp.alpha2 * sp.A_plus);
    sp.eps_minus1 = w2 * (sp.alpha1 - sp.alpha2 * sp.A_minus);
    sp.eps_0 = 0.0;
    return sp;
}

// Band-edge eigenfunctions in the rescaled time varpi = omega_bar (tau - tau0):
//   n =  0: sn cn dn (proportional to the bounce velocity)
//   n = +1: dn (sn^2 + c_+), c_+ = 2 / (p^2 + A_plus)
//   n = -1: dn (sn^2 + c_-), c_- = 2 / (p^2 + A_minus)
// Normalization is conventional; c_- grows as 1/p^2 toward the saddle, where the
// overall scale of the mode is arbitrary anyway.
inline double lame_mode(int n, double varpi, const classical::BounceState& s) {
    const auto j = elliptic::jacobi(varpi, s.p);
    if (n == 0) {
        return j.sn * j.cn * j.dn;
    }
    if (n == 1 || n == -1) {
        const double m = s.m;
        const double rad = std::sqrt((4.0 * m - 1.0) * m + 1.0);
        const double A = -(2.0 + 5.0 * m) + (n == 1 ? -2.0 : 2.0) * rad;
        const double c = 2.0 / (m + A);
        return j.dn * (j.sn * j.sn + c);
    }
    throw ParameterDomainError("lame_mode: band index must be -1, 0, or +1");
}

enum class PeriodDerivative {
    total,        // d/dq acts on the full period L(q) = 4 K(q) / (omega sqrt(X(q)))
    modulus_only  // d/dq differentiates only the complete elliptic factor K(q)
};

namespace detail {

inline constexpr double deep_log_threshold = -100.0; // on log(1 - p^2)

// d(chi1)/dq, dX/dq and dK/dq with q = p^2, assembled cancellation-free in each
// parameter zone. K' uses the Legendre relation dK/dq = (E - (1-q)K)/(2q(1-q)),
// replaced by its Maclaurin series where the numerator cancels.
struct PeriodChain {
    double dchi1_dq;
    double dX_dq;
    double dK_dq;
};

inline PeriodChain period_chain(const classical::BounceState& s) {
    PeriodChain ch;
    const double zeta = s.kappa - classical::kappa_min;
    if (s.m == 0.0) {
        ch.dchi1_dq = 0.5;
        ch.dX_dq = 0.5;
    } else if (s.log_pbar_sq < deep_log_threshold) {
        // chi2, chi3 ~ +-mb/2 may have underflowed; use the limiting chain.
        ch.dchi1_dq = 0.5 * std::exp(s.log_pbar_sq);
        ch.dX_dq = -0.5;
    } else if (zeta < classical::detail::series_saddle_threshold) {
        const double d = std::sqrt(zeta);
        ch.dchi1_dq = (1.0 - d) / (2.0 - 4.0 * d);
        ch.dX_dq = (1.0 - 3.0 * d) / (2.0 - 4.0 * d);
    } else {
        const double c1p = 1.0 / (s.chi1 * (3.0 * s.chi1 - 2.0));
        const double c2p = 1.0 / (s.chi2 * (3.0 * s.chi2 - 2.0));
        const double c3p = 1.0 / (s.chi3 * (3.0 * s.chi3 - 2.0));
        const double Xp = c1p - c3p;
        const double qp = ((c1p - c2p) * s.X - (s.chi1 - s.chi2) * Xp) / (s.X * s.X);
        ch.dchi1_dq = c1p / qp;
        ch.dX_dq = Xp / qp;
    }
    if (s.log_pbar_sq < deep_log_threshold) {
        ch.dK_dq = 0.5 * std::exp(-s.log_pbar_sq);
    } else if (s.m < 1e-4) {
        ch.dK_dq = (constants::pi / 4.0) * (1.0 + s.m * (0.125 + s.m * (3.0 / 64.0))) /
                   (2.0 * s.mb);
    } else {
        ch.dK_dq = (s.Ec - s.mb * s.Kc) / (2.0 * s.m * s.mb);
    }
    return ch;
}

} // namespace detail

// dL/dq along the chosen convention. Positive for both; grows like exp(-log(1-p^2))
// toward kappa = 0, so it can overflow to +inf in the deep tail (the determinant
// routines below compose it in log space instead).
inline double period_derivative(const classical::BounceState& s,
                                const units::PotentialParams& params,
                                PeriodDerivative kind) {
    const auto ch = detail::period_chain(s);
    const double omega = params.hbar_omega;
    double inner = ch.dK_dq;
    if (kind == PeriodDerivative::total) {
        inner -= s.Kc * ch.dX_dq / (2.0 * s.X);
    }
    return 4.0 / (omega * std::sqrt(s.X)) * inner;
}

// Wronskian normalizer W = (9/8) a^2 omega^2 (chi1 - chi2) X dchi1/dq.
// Vanishes linearly at the saddle and like (1 - p^2) at kappa -> 0 (where it can
// underflow; its logarithm is what the determinant composition uses).
inline double wronskian(const classical::BounceState& s, const units::PotentialParams& params) {
    const double a2w2 = params.a * params.a * params.hbar_omega * params.hbar_omega;
    if (s.m == 0.0) {
        return 0.0;
    }
    if (s.log_pbar_sq < detail::deep_log_threshold) {
        return (9.0 / 16.0) * a2w2 * std::exp(s.log_pbar_sq);
    }
    const auto ch = detail::period_chain(s);
    return (9.0 / 8.0) * a2w2 * (s.chi1 - s.chi2) * s.X * ch.dchi1_dq;
}

// log of the regularized periodic determinant, Det^R = (dL/dq) N^-2 / W > 0.
// Deep in the tail all three factors are composed analytically in log space;
// the kind distinction is exponentially irrelevant there.
inline double det_regularized_log(const classical::BounceState& s,
                                  const units::PotentialParams& params,
                                  PeriodDerivative kind = PeriodDerivative::total) {
    if (s.m == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double omega = params.hbar_omega;
    if (s.log_pbar_sq < detail::deep_log_threshold) {
        return std::log(64.0 / 15.0) - 2.0 * std::log(omega) - 2.0 * s.log_pbar_sq;
    }
    const double dLdq = period_derivative(s, params, kind);
    const double nsq = classical::norm_squared(s, params);
    const double w = wronskian(s, params);
    return std::log(dLdq) + std::log(nsq) - std::log(w);
}

inline double det_regularized(const classical::BounceState& s,
                              const units::PotentialParams& params,
                              PeriodDerivative kind = PeriodDerivative::total) {
    if (s.m == 0.0) {
        return 0.0;
    }
    return std::exp(det_regularized_log(s, params, kind));
}

// Harmonic reference determinant Det^h = -4 sinh^2(omega L / 2) < 0.
inline double det_harmonic(double L, const units::PotentialParams& params) {
    if (!(L > 0.0)) {
        throw ParameterDomainError("det_harmonic: period must be positive");
    }
    const double sh = std::sinh(0.5 * params.hbar_omega * L);
    return -4.0 * sh * sh;
}

// log |Det^h| = omega L + 2 log(1 - exp(-omega L)), exact for all omega L > 0.
inline double det_harmonic_log(double L, const units::PotentialParams& params) {
    if (!(L > 0.0)) {
        throw ParameterDomainError("det_harmonic_log: period must be positive");
    }
    const double wl = params.hbar_omega * L;
    return wl + 2.0 * std::log1p(-std::exp(-wl));
}

// Det^R / Det^h. Negative in the interior (one unstable mode), approaching
// -1/(60 omega^2) as T* -> 0 and 0 at the saddle.
inline double det_ratio(const classical::BounceState& s, const units::PotentialParams& params,
                        PeriodDerivative kind = PeriodDerivative::total) {
    if (s.m == 0.0) {
        return 0.0;
    }
    const double omega = params.hbar_omega;
    if (!std::isfinite(s.L)) {
        // kappa = 0: Det^R and |Det^h| both diverge; their ratio does not.
        return -1.0 / (60.0 * omega * omega);
    }
    return -std::exp(det_regularized_log(s, params, kind) - det_harmonic_log(s.L, params));
}

// Aggregate record used by reporting paths.
struct DeterminantData {
    double wronskian = 0.0;
    LogSigned det_regularized;
    LogSigned det_harmonic;
    double ratio = 0.0;
};

inline DeterminantData determinant_data(const classical::BounceState& s,
                                        const units::PotentialParams& params,
                                        PeriodDerivative kind = PeriodDerivative::total) {
    DeterminantData d;
    d.wronskian = wronskian(s, params);
    if (s.m == 0.0) {
        d.det_regularized = LogSigned{-std::numeric_limits<double>::infinity(), 0};
    } else {
        d.det_regularized = LogSigned{det_regularized_log(s, params, kind), 1};
    }
    d.det_harmonic = LogSigned{det_harmonic_log(s.L, params), -1};
    d.ratio = det_ratio(s, params, kind);
    return d;
}

} // namespace cubictunnel::fluctuation
