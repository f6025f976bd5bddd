#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include "cubictunnel/constants.hpp"

namespace cubictunnel::quadrature {

struct Node {
    double x = 0.0; // abscissa on [-1, 1]
    double w = 0.0; // weight
};

// Gauss-Legendre nodes by Newton iteration on P_n; deterministic to machine precision.
inline std::vector<Node> make_gauss_legendre(int n) {
    std::vector<Node> nodes(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess for the i-th positive root.
        double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P_{n-1}(x).
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // One clean-up pass after convergence keeps roots at full precision.
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                x -= p1 / dp;
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = {-x, w};
        nodes[static_cast<std::size_t>(n - 1 - i)] = {x, w};
    }
    if (n % 2 == 1) {
        // Recompute the central weight exactly at x = 0.
        double p0 = 1.0;
        double p1 = 0.0;
        for (int k = 2; k <= n; ++k) {
            double p2 = (-(k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        // P_n(0) = 0 for odd n, so dp = n * (0 - P_{n-1}(0)) / (0 - 1) = n * P_{n-1}(0).
        const double dp = n * p0;
        nodes[static_cast<std::size_t>(n / 2)] = {0.0, 2.0 / (dp * dp)};
    }
    return nodes;
}

// Cached rules; computing a rule is cheap but callers ask for the same orders repeatedly.
inline const std::vector<Node>& gauss_legendre(int n) {
    static std::map<int, std::vector<Node>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, make_gauss_legendre(n)).first;
    }
    return it->second;
}

template <class F>
double integrate(F&& f, double a, double b, int n) {
    const auto& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double sum = 0.0;
    for (const auto& node : rule) {
        sum += node.w * f(mid + hw * node.x);
    }
    return hw * sum;
}

// Composite rule: uniform panels, n-point Gauss-Legendre on each.
// Suited to integrands whose scale of variation is much shorter than b - a.
template <class F>
double integrate_panels(F&& f, double a, double b, int panels, int n) {
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        sum += integrate(f, a + i * h, a + (i + 1) * h, n);
    }
    return sum;
}

} // namespace cubictunnel::quadrature
