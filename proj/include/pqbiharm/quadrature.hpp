#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pqbiharm {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   // absolute error estimate
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (positive half; nodes are symmetric).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
inline void gk15(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * gk_nodes[i]);
        fv[14 - i] = f(c + h * gk_nodes[i]);
    }
    fv[7] = f(c);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 7; ++i) resk += kronrod_w[i] * (fv[i] + fv[14 - i]);
    resk += kronrod_w[7] * fv[7];
    // Gauss nodes are the odd-indexed Kronrod nodes.
    for (int i = 0; i < 3; ++i) resg += gauss_w[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    resg += gauss_w[3] * fv[7];
    result = resk * h;
    err = std::max(std::fabs(resk - resg) * std::fabs(h),
                   50.0 * std::numeric_limits<double>::epsilon() * std::fabs(result));
}

template <typename F>
inline QuadratureResult adapt(const F& f, double a, double b, double abs_tol, double rel_tol,
                              int depth, double whole, double whole_err) {
    if (whole_err <= abs_tol || whole_err <= rel_tol * std::fabs(whole)) {
        return {whole, whole_err, true};
    }
    if (depth <= 0) return {whole, whole_err, false};
    const double m = 0.5 * (a + b);
    double l, le, r, re;
    gk15(f, a, m, l, le);
    gk15(f, m, b, r, re);
    auto lr = adapt(f, a, m, 0.5 * abs_tol, rel_tol, depth - 1, l, le);
    auto rr = adapt(f, m, b, 0.5 * abs_tol, rel_tol, depth - 1, r, re);
    return {lr.value + rr.value, lr.error + rr.error, lr.converged && rr.converged};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a,b].
template <typename F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-12,
                                    double abs_tol = 1e-15, int max_depth = 40) {
    if (!(b >= a)) throw std::invalid_argument("integrate_adaptive: b < a");
    if (a == b) return {0.0, 0.0, true};
    double whole, err;
    detail::gk15(f, a, b, whole, err);
    return detail::adapt(f, a, b, abs_tol, rel_tol, max_depth, whole, err);
}

/// Same, but with mandatory panel boundaries (e.g. at known kinks or zeros of the integrand).
template <typename F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    const std::vector<double>& breakpoints, double rel_tol = 1e-12,
                                    double abs_tol = 1e-15, int max_depth = 40) {
    std::vector<double> pts{a};
    for (double x : breakpoints)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    QuadratureResult total{0.0, 0.0, true};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto r = integrate_adaptive(f, pts[i], pts[i + 1], rel_tol,
                                    abs_tol / static_cast<double>(pts.size()), max_depth);
        total.value += r.value;
        total.error += r.error;
        total.converged = total.converged && r.converged;
    }
    return total;
}

}  // namespace pqbiharm
