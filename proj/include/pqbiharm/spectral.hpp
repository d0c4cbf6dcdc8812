#pragma once

#include <functional>
#include <vector>

#include "pqbiharm/gentrig.hpp"
#include "pqbiharm/shooting.hpp"

namespace pqbiharm {

/// Eigenpair normalized so that ||f''||_{p,I} = 1 and f'(0) > 0.
struct SpectralCouple {
    Eigenfunction f;
    double lambda;
    int n;
};

/// Classification of the s-number relation the value participates in:
/// isomorphism numbers bound it from below for p < q, approximation numbers from
/// above for q < p, and for p = q both collapse to equality. The stated equalities
/// i_n = b_n (p <= q) and a_n = d_n (q <= p) rest on companion results in the
/// approximation-theory literature.
enum class SNumberKind { isomorphism_lower, approximation_upper, strict_equality };

const char* to_string(SNumberKind kind);

struct SNumberReport {
    double p;
    double q;
    double t0;
    int n;
    double sn_n;    // n-th spectral number on [0, t0]
    double value;   // sn_n^{-1/q} = |I|^{1/q+2-1/p} / (n^2 lambda_1^{1/q})
    SNumberKind kind;
};

/// L^r norm of f over [0, t0] by adaptive quadrature; `breakpoints` marks interior
/// kinks (e.g. zeros of f when r is fractional). Throws on tolerance failure.
double lq_norm(const std::function<double(double)>& f, double t0, double r,
               const std::vector<double>& breakpoints = {}, double rel_tol = 1e-9);

/// Rescale an eigenfunction to the spectral couple: f = sgn(f'(0)) fin / ||fin''||_p,
/// lambda = (||fin''||_p / ||fin||_q)^q.
SpectralCouple normalize_spectral(const Eigenfunction& eig);

/// First spectral number lambda_1 on the unit interval, memoized per (p, q).
double lambda1_unit(double p, double q);

/// n-th spectral couple on [0, t0] from the first couple on [0,1]:
/// lambda_n = n^{2q} lambda_1 and sn_n = n^{2q} t0^{q/p-1-2q} lambda_1.
SpectralCouple spectral_chain(const SpectralCouple& couple1, int n, double t0);

/// Norm of the embedding W^{2,p}_D[0,t0] -> L^q[0,t0]:
/// ||E2|| = t0^{1/q-1/p+2} lambda_1^{-1/q}.
double embedding_norm(double p, double q, double t0);

/// Closed form of ||E2|| on the line q = p' with t0 = pi_{2,p'}:
/// (2/p')^{2/p'} B(1/2, (p'+1)/p')^{1/p'-1/p}.
double closed_form_norm_qpprime(double p);

/// Closed-form eigenpair on the q = p' line:
///   lambda_n(c) = (p' pi_{2,p'}^2 n^2 / (2 t0^2))^p c^{p-p'},
///   f_{n,c}(x) = c sin_{2,p'}(pi_{2,p'} n x / t0).
struct ClosedFormEigenpair {
    double lambda;
    double c;
    int n;
    double t0;
    GenTrigParams gentrig;   // (2, p')

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;   // -c rho^2 (p'/2) spow(sin_{2,p'}(rho x), p')
};

ClosedFormEigenpair closed_form_lambda(double p, int n, double c, double t0);

/// s-number table for n = 1..n_max.
std::vector<SNumberReport> s_number_bounds(double p, double q, double t0, int n_max);

void write_snumbers_csv(std::ostream& os, const std::vector<SNumberReport>& reports);

/// Extremal value n^{1/q-1/p} of the ratio (sum |a_i|^q)^{1/q} / (sum |a_i|^p)^{1/p}
/// over nonzero vectors in R^n: the infimum for p <= q, the supremum for q <= p,
/// attained at constant-magnitude vectors.
double lp_ratio_extrema(double p, double q, int n);

/// Sharp first-order embedding constant sup ||f||_s / ||f'||_r over W^{1,r}_0[0,t0]:
///   t0^{1/r'+1/s} (r'+s)^{1/r-1/s} (r')^{1/s} s^{1/r'} / (2 B(1/s, 1/r')).
double first_order_norm(double r, double s, double t0);

/// Sharp constant sup ||u||_2 / ||u'||_p over mean-zero u on [0,t0]:
///   t0^{1/p'+1/2} (p'+2)^{1/p-1/2} (p')^{1/2} / (2^{1/p} B(1/2, 1/p')).
double mean_zero_norm(double p, double t0);

}  // namespace pqbiharm
