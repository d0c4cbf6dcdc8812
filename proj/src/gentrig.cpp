#include "pqbiharm/gentrig.hpp"

#include <cmath>
#include <limits>

#include "pqbiharm/quadrature.hpp"

namespace pqbiharm {

namespace {

constexpr double kInverseTol = 1e-12;   // |F(y) - x| target for the principal branch inverse
constexpr double kDerivCap = 1e8;       // beyond this slope Newton is abandoned for bisection

double conjugate(double r) { return r / (r - 1.0); }

}  // namespace

GenTrigParams::GenTrigParams(double r_, double s_) : r(r_), s(s_) {
    if (!(r > 1.0) || !(s > 1.0))
        throw std::domain_error("GenTrigParams: requires r > 1 and s > 1");
    r_conj = conjugate(r);
    period_quarter = beta_function(1.0 / s, 1.0 / r_conj) / s;
}

double beta_function(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("beta_function: requires a > 0 and b > 0");
    return std::beta(a, b);
}

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("incomplete_beta: requires a > 0 and b > 0");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("incomplete_beta: requires x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return beta_function(a, b);
    if (x > 0.5) return beta_function(a, b) - incomplete_beta(1.0 - x, b, a);
    // Substitute t = tau^{1/a}; the t^{a-1} singularity cancels and the integrand
    // becomes (1/a)(1 - tau^{1/a})^{b-1} on [0, x^a], bounded since x <= 1/2.
    const double inv_a = 1.0 / a;
    auto g = [=](double tau) { return std::pow(1.0 - std::pow(tau, inv_a), b - 1.0) * inv_a; };
    auto q = integrate_adaptive(g, 0.0, std::pow(x, a), 1e-13, 1e-16, 48);
    return q.value;
}

double pi_rs(const GenTrigParams& params) { return 2.0 * params.period_quarter; }

double pi_rs(double r, double s) { return pi_rs(GenTrigParams(r, s)); }

double arcsin_rs(const GenTrigParams& params, double y) {
    if (!(y >= 0.0 && y <= 1.0))
        throw std::domain_error("arcsin_rs: requires y in [0,1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return params.period_quarter;
    // substitution tau = t^s turns int_0^y (1-t^s)^{-1/r} dt into (1/s) B_{y^s}(1/s, 1/r')
    return incomplete_beta(std::pow(y, params.s), 1.0 / params.s, 1.0 / params.r_conj) /
           params.s;
}

namespace {

// Principal branch: solve F_{r,s}(y) = x for y in [0,1], x in [0, pi_{r,s}/2].
// Bisection narrows the bracket, Newton refines where the slope (1-y^s)^{-1/r}
// stays moderate; near y = 1 the slope blows up and bisection runs alone.
double principal_sin(const GenTrigParams& p, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= p.period_quarter) return 1.0;
    double lo = 0.0, hi = 1.0;
    double y = x / p.period_quarter;  // crude seed, right monotone shape
    for (int it = 0; it < 200; ++it) {
        const double fy = arcsin_rs(p, y) - x;
        if (std::fabs(fy) <= kInverseTol) return y;
        if (fy > 0.0)
            hi = y;
        else
            lo = y;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) return 0.5 * (lo + hi);
        const double one_minus = 1.0 - std::pow(y, p.s);
        double ynext = std::numeric_limits<double>::quiet_NaN();
        if (one_minus > 0.0) {
            const double slope = std::pow(one_minus, -1.0 / p.r);
            if (slope < kDerivCap) ynext = y - fy / slope;
        }
        if (!(ynext > lo && ynext < hi)) ynext = 0.5 * (lo + hi);
        y = ynext;
    }
    return y;
}

// Quadrant reduction: returns the reduced argument xi in [0, h] plus the quadrant
// index of |x|, where h is the quarter period. Uses an fma for the remainder so
// the reduction does not drift over many periods.
struct Reduced {
    double xi;
    int quadrant;   // 0..3 within the period of |x|
    double sign;    // odd symmetry sign from x < 0
};

Reduced reduce_argument(const GenTrigParams& p, double x) {
    Reduced out{0.0, 0, 1.0};
    double y = x;
    if (y < 0.0) {
        out.sign = -1.0;
        y = -y;
    }
    const double h = p.period_quarter;
    double kf = std::floor(y / h);
    double xi = std::fma(-kf, h, y);
    if (xi < 0.0) {
        kf -= 1.0;
        xi = std::fma(-kf, h, y);
    } else if (xi > h) {
        kf += 1.0;
        xi = std::fma(-kf, h, y);
    }
    if (xi < 0.0) xi = 0.0;
    if (xi > h) xi = h;
    out.xi = xi;
    out.quadrant = static_cast<int>(std::fmod(kf, 4.0));
    return out;
}

}  // namespace

double sin_rs(const GenTrigParams& params, double x) {
    const Reduced red = reduce_argument(params, x);
    const double h = params.period_quarter;
    double v;
    switch (red.quadrant) {
        case 0: v = principal_sin(params, red.xi); break;
        case 1: v = principal_sin(params, h - red.xi); break;
        case 2: v = -principal_sin(params, red.xi); break;
        default: v = -principal_sin(params, h - red.xi); break;
    }
    return red.sign * v;
}

double cos_rs(const GenTrigParams& params, double x) {
    const Reduced red = reduce_argument(params, x);
    const double h = params.period_quarter;
    double y;        // |sin| at the reduced argument
    double sign;     // slope sign of sin_rs in this quadrant (cos is even in x)
    switch (red.quadrant) {
        case 0: y = principal_sin(params, red.xi); sign = 1.0; break;
        case 1: y = principal_sin(params, h - red.xi); sign = -1.0; break;
        case 2: y = principal_sin(params, red.xi); sign = -1.0; break;
        default: y = principal_sin(params, h - red.xi); sign = 1.0; break;
    }
    const double one_minus = std::max(0.0, 1.0 - std::pow(y, params.s));
    return sign * std::pow(one_minus, 1.0 / params.r);
}

double check_sum_formula(double r, double s, double t) {
    if (!(r > 1.0) || !(s > 1.0))
        throw std::domain_error("check_sum_formula: requires r > 1 and s > 1");
    const GenTrigParams rs(r, s);
    const GenTrigParams dual(conjugate(s), conjugate(r));
    const double lhs = std::pow(std::fabs(cos_rs(rs, pi_rs(rs) * t / 2.0)), r);
    const double rhs =
        std::pow(std::fabs(sin_rs(dual, pi_rs(dual) * (1.0 - t) / 2.0)), conjugate(r));
    return lhs - rhs;
}

}  // namespace pqbiharm
