#pragma once

#include <algorithm>
#include <cmath>

#include "cubictunnel/constants.hpp"
#include "cubictunnel/errors.hpp"

namespace cubictunnel::elliptic {

// Elliptic modulus p with the complementary combination p_bar_sq = 1 - p^2 stored
// separately: every near-degenerate formula needs 1 - p^2 far below the precision
// reachable by subtracting doubles near 1.
struct Modulus {
    double p = 0.0;        // in [0, 1]
    double p_bar_sq = 1.0; // 1 - p^2, kept exact independently of p

    static Modulus from_p(double p) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ParameterDomainError("Modulus: p must lie in [0, 1]");
        }
        // (1 - p)(1 + p) avoids the cancellation of 1 - p*p near p = 1.
        return Modulus{p, (1.0 - p) * (1.0 + p)};
    }

    // For callers that know both m = p^2 and 1 - p^2 without cancellation.
    static Modulus from_parameter_pair(double m, double complement) {
        if (!(m >= 0.0 && m <= 1.0) || !(complement >= 0.0 && complement <= 1.0)) {
            throw ParameterDomainError("Modulus: parameter pair out of [0, 1]");
        }
        return Modulus{std::sqrt(m), complement};
    }

    static Modulus from_p_bar_sq(double complement) {
        if (!(complement >= 0.0 && complement <= 1.0)) {
            throw ParameterDomainError("Modulus: 1 - p^2 must lie in [0, 1]");
        }
        return Modulus{std::sqrt(1.0 - complement), complement};
    }

    double m() const { return p * p; } // parameter m = p^2
};

struct JacobiTriple {
    double sn = 0.0;
    double cn = 1.0;
    double dn = 1.0;
};

// Complete elliptic integral of the first kind via the arithmetic-geometric mean:
// K(p) = pi / (2 AGM(1, sqrt(1 - p^2))). Relative error below 1e-15.
inline double complete_K(const Modulus& mod) {
    if (mod.p_bar_sq <= 0.0) {
        throw DivergenceError("complete_K: logarithmic divergence at p = 1");
    }
    double a = 1.0;
    double b = std::sqrt(mod.p_bar_sq);
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return constants::pi / (2.0 * a);
}

// Complete elliptic integral of the second kind via the AGM c-sum:
// E = K (1 - sum_n 2^{n-1} c_n^2) with c_0 = p, c_{n+1} = (a_n - b_n)/2.
inline double complete_E(const Modulus& mod) {
    if (mod.p_bar_sq <= 0.0) {
        return 1.0; // E(1) = 1 exactly
    }
    if (mod.p == 0.0) {
        return 0.5 * constants::pi;
    }
    double a = 1.0;
    double b = std::sqrt(mod.p_bar_sq);
    double c = mod.p;
    double sum = 0.5 * c * c;
    double pow2 = 0.5;
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    return constants::pi / (2.0 * a) * (1.0 - sum);
}

namespace detail {

// Carlson symmetric integral R_F by the duplication algorithm. The duplication
// loop runs until the fractional spread is below 1e-3; the fifth-order Taylor
// tail then contributes a relative error of order 1e-18.
inline double carlson_rf(double x, double y, double z) {
    double a = (x + y + z) / 3.0;
    double ex = (a - x) / a;
    double ey = (a - y) / a;
    double ez = (a - z) / a;
    for (int i = 0; i < 64 && std::max({std::abs(ex), std::abs(ey), std::abs(ez)}) > 1e-3; ++i) {
        const double sx = std::sqrt(x);
        const double sy = std::sqrt(y);
        const double sz = std::sqrt(z);
        const double lambda = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = (x + y + z) / 3.0;
        ex = (a - x) / a;
        ey = (a - y) / a;
        ez = (a - z) / a;
    }
    const double e2 = ex * ey - ez * ez;
    const double e3 = ex * ey * ez;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

} // namespace detail

// Incomplete elliptic integral of the first kind F(lambda, p) for amplitude in [0, pi/2],
// via F = sin(lambda) R_F(cos^2 lambda, 1 - p^2 sin^2 lambda, 1).
inline double incomplete_F(double lambda, const Modulus& mod) {
    if (!(lambda >= 0.0 && lambda <= 0.5 * constants::pi + 1e-14)) {
        throw ParameterDomainError("incomplete_F: amplitude must lie in [0, pi/2]");
    }
    if (lambda == 0.0) {
        return 0.0;
    }
    const double s = std::sin(lambda);
    const double c = std::cos(lambda);
    const double y = 1.0 - mod.p * mod.p * s * s;
    if (y <= 0.0) {
        throw DivergenceError("incomplete_F: divergence at p = 1, lambda = pi/2");
    }
    return s * detail::carlson_rf(c * c, y, 1.0);
}

namespace detail {

// Hyperbolic first-order forms for p_bar_sq <= threshold, valid for |u| <= K after
// argument reduction (error O(p_bar_sq^2) there).
inline JacobiTriple jacobi_hyperbolic(double u, double p_bar_sq) {
    const double t = std::tanh(u);
    const double s = 1.0 / std::cosh(u);
    // (sinh cosh - u) sech^2 = tanh - u sech^2, bounded for all u.
    const double g = t - u * s * s;
    JacobiTriple j;
    j.sn = t + 0.25 * p_bar_sq * g;
    j.cn = s - 0.25 * p_bar_sq * g * t;
    const double m = 1.0 - p_bar_sq;
    j.dn = std::sqrt(p_bar_sq + m * j.cn * j.cn);
    return j;
}

// Trigonometric first-order forms for m <= threshold, |u| reduced to one quarter period.
inline JacobiTriple jacobi_trig(double u, double m, double p_bar_sq) {
    const double s = std::sin(u);
    const double c = std::cos(u);
    const double g = u - s * c;
    JacobiTriple j;
    j.sn = s - 0.25 * m * g * c;
    j.cn = c + 0.25 * m * g * s;
    j.dn = std::sqrt(p_bar_sq + m * j.cn * j.cn);
    return j;
}

// K(p) for p_bar_sq below the AGM comfort zone, from the standard near-degenerate
// asymptote K = ln(4/p_bar) + (p_bar^2/4)(ln(4/p_bar) - 1).
inline double complete_K_near_one(double p_bar_sq) {
    const double l = std::log(4.0) - 0.5 * std::log(p_bar_sq);
    return l + 0.25 * p_bar_sq * (l - 1.0);
}

} // namespace detail

// Jacobi elliptic triple (sn, cn, dn)(u, p) for any real u.
// Main branch: AGM ascent + descending Landen recursion, after reduction mod 4K.
// Degenerate branches: first-order hyperbolic / trigonometric forms, after
// reduction to |u| <= K with the half-period signs sn(u+2K) = -sn(u),
// cn(u+2K) = -cn(u), dn(u+2K) = dn(u).
inline JacobiTriple jacobi(double u, const Modulus& mod) {
    const double m = mod.p * mod.p;

    if (mod.p_bar_sq < 1e-8) {
        if (mod.p_bar_sq <= 0.0) {
            // Exact degenerate limit, aperiodic: sn = tanh u, cn = dn = sech u.
            const double t = std::tanh(u);
            const double s = 1.0 / std::cosh(u);
            return JacobiTriple{t, s, s};
        }
        const double K = detail::complete_K_near_one(mod.p_bar_sq);
        const double n = std::round(u / (2.0 * K));
        const double ur = u - 2.0 * K * n;
        const double sign = (std::fmod(std::abs(n), 2.0) < 0.5) ? 1.0 : -1.0;
        JacobiTriple j = detail::jacobi_hyperbolic(ur, mod.p_bar_sq);
        j.sn *= sign;
        j.cn *= sign;
        return j;
    }

    if (m < 1e-8) {
        if (m <= 0.0) {
            return JacobiTriple{std::sin(u), std::cos(u), 1.0};
        }
        const double K = complete_K(mod);
        const double n = std::round(u / (2.0 * K));
        const double ur = u - 2.0 * K * n;
        const double sign = (std::fmod(std::abs(n), 2.0) < 0.5) ? 1.0 : -1.0;
        JacobiTriple j = detail::jacobi_trig(ur, m, mod.p_bar_sq);
        j.sn *= sign;
        j.cn *= sign;
        return j;
    }

    const double K = complete_K(mod);
    const double period = 4.0 * K;
    double ur = std::fmod(u, period);
    if (ur < 0.0) {
        ur += period;
    }

    // AGM ascent: a_{n+1} = (a_n + b_n)/2, c_{n+1} = (a_n - b_n)/2.
    double a[64];
    double c[64];
    a[0] = 1.0;
    c[0] = mod.p;
    double b = std::sqrt(mod.p_bar_sq);
    int levels = 0;
    while (levels < 62 && std::abs(c[levels]) > 1e-16 * a[levels]) {
        const double an = 0.5 * (a[levels] + b);
        const double cn1 = 0.5 * (a[levels] - b);
        b = std::sqrt(a[levels] * b);
        ++levels;
        a[levels] = an;
        c[levels] = cn1;
    }

    // Descending Landen phase recursion.
    double phi = std::ldexp(a[levels] * ur, levels);
    for (int n = levels; n >= 1; --n) {
        const double t = std::clamp(c[n] / a[n] * std::sin(phi), -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(t));
    }

    JacobiTriple j;
    j.sn = std::sin(phi);
    j.cn = std::cos(phi);
    // dn from 1 - m sn^2 = p_bar_sq + m cn^2; exact non-negative form, no cancellation.
    j.dn = std::sqrt(mod.p_bar_sq + m * j.cn * j.cn);
    return j;
}

} // namespace cubictunnel::elliptic
