#pragma once

#include <stdexcept>

namespace pqbiharm {

/// Parameter pair (r, s), both > 1, for the generalized trigonometric functions
/// sin_{r,s} / cos_{r,s}. Caches the conjugate exponent r' = r/(r-1) and the
/// quarter period pi_{r,s}/2.
struct GenTrigParams {
    double r;
    double s;
    double r_conj;          // r/(r-1)
    double period_quarter;  // pi_{r,s}/2

    GenTrigParams(double r_, double s_);
};

/// Euler Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b). Requires a, b > 0.
double beta_function(double a, double b);

/// Lower incomplete Beta function B_x(a,b) = int_0^x t^{a-1}(1-t)^{b-1} dt,
/// non-regularized, for x in [0,1], a, b > 0.
double incomplete_beta(double x, double a, double b);

/// Generalized half period pi_{r,s} = (2/s) B(1/s, 1/r').
double pi_rs(const GenTrigParams& params);
double pi_rs(double r, double s);

/// Inverse of sin_{r,s} on the principal branch: F_{r,s}(y) = (1/s) B_{y^s}(1/s, 1/r')
/// maps [0,1] onto [0, pi_{r,s}/2], strictly increasing.
double arcsin_rs(const GenTrigParams& params, double y);

/// sin_{r,s}(x): odd, even about pi_{r,s}/2, 2 pi_{r,s}-periodic; on the principal
/// branch it inverts arcsin_rs. Defined for all real x.
double sin_rs(const GenTrigParams& params, double x);

/// cos_{r,s}(x) = d/dx sin_{r,s}(x). On the principal branch equals
/// (1 - sin_{r,s}(x)^s)^{1/r}.
double cos_rs(const GenTrigParams& params, double x);

/// Residual of the complementary identity
///   [cos_{r,s}(pi_{r,s} t/2)]^r - [sin_{s',r'}(pi_{s',r'}(1-t)/2)]^{r'}
/// for t in [0,1]; zero in exact arithmetic.
double check_sum_formula(double r, double s, double t);

}  // namespace pqbiharm
