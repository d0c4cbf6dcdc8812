// Test-only oracles, independent of the library's own quadrature and integrator.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Adaptive Simpson; deliberately a different scheme from the library's Gauss-Kronrod.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13, int depth = 48) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// int_0^x t^{a-1}(1-t)^{b-1} dt with the endpoint substitutions t = tau^{1/a}
// near 0 and (1-t) = sigma^{1/b} near 1, so both integrands are bounded.
inline double incomplete_beta_quadrature(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    const double split = std::min(0.5, x);
    const double inv_a = 1.0 / a;
    auto left = [=](double tau) {
        return inv_a * std::pow(1.0 - std::pow(tau, inv_a), b - 1.0);
    };
    double total = adaptive_simpson(left, 0.0, std::pow(split, a));
    if (x > split) {
        const double inv_b = 1.0 / b;
        auto right = [=](double sigma) {
            return inv_b * std::pow(1.0 - std::pow(sigma, inv_b), a - 1.0);
        };
        // int_{1/2}^{x} = int over sigma in [(1-x)^b, (1/2)^b]
        total += adaptive_simpson(right, std::pow(1.0 - x, b), std::pow(0.5, b));
    }
    return total;
}

inline double beta_quadrature(double a, double b) { return incomplete_beta_quadrature(1.0, a, b); }

// Classical RK4 with fixed substeps; independent of the library's RK5(4).
inline void rk4_step(const std::function<std::vector<double>(const std::vector<double>&)>& f,
                     std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> k1 = f(y), z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = y[i] + 0.5 * h * k1[i];
    std::vector<double> k2 = f(z);
    for (std::size_t i = 0; i < n; ++i) z[i] = y[i] + 0.5 * h * k2[i];
    std::vector<double> k3 = f(z);
    for (std::size_t i = 0; i < n; ++i) z[i] = y[i] + h * k3[i];
    std::vector<double> k4 = f(z);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Time at which |u| + |u'| for u'' = u^2, u(0)=0, u'(0)=1 first exceeds `threshold`.
inline double scalar_blowup_hit_time(double threshold) {
    std::vector<double> y{0.0, 1.0};
    auto f = [](const std::vector<double>& s) {
        return std::vector<double>{s[1], s[0] * s[0]};
    };
    double t = 0.0;
    for (long i = 0; i < 100'000'000; ++i) {
        // step shrinks with the solution scale so the pole is resolved
        const double scale = std::fabs(y[0]) + std::fabs(y[1]) + 1.0;
        const double h = 1e-3 / std::sqrt(scale);
        const std::vector<double> prev = y;
        const double tprev = t;
        rk4_step(f, y, h);
        t += h;
        if (std::fabs(y[0]) + std::fabs(y[1]) >= threshold) {
            // linear interpolation of the crossing inside the last step
            const double s0 = std::fabs(prev[0]) + std::fabs(prev[1]);
            const double s1 = std::fabs(y[0]) + std::fabs(y[1]);
            return tprev + h * (threshold - s0) / (s1 - s0);
        }
    }
    throw std::runtime_error("scalar_blowup_hit_time: threshold never reached");
}

// Blow-up time of u'' = u^2, u(0)=0, u'(0)=1 by threshold extrapolation
// (Aitken over thresholds M, 10M, 100M).
inline double scalar_blowup_time(double threshold = 1e8) {
    const double t1 = scalar_blowup_hit_time(threshold);
    const double t2 = scalar_blowup_hit_time(10.0 * threshold);
    const double t3 = scalar_blowup_hit_time(100.0 * threshold);
    const double d1 = t2 - t1, d2 = t3 - t2;
    return t3 + d2 * d2 / (d1 - d2);
}

// The same blow-up time in closed form: energy conservation gives u' = sqrt(1 + 2u^3/3),
// so T = int_0^inf du / sqrt(1 + 2u^3/3), evaluated as two smooth integrals.
inline double scalar_blowup_time_closed_form() {
    auto f1 = [](double u) { return 1.0 / std::sqrt(1.0 + 2.0 * u * u * u / 3.0); };
    auto f2 = [](double tau) {
        return 2.0 / std::sqrt(tau * tau * tau * tau * tau * tau + 2.0 / 3.0);
    };
    return adaptive_simpson(f1, 0.0, 1.0) + adaptive_simpson(f2, 0.0, 1.0);
}

}  // namespace oracles
