#include "pqbiharm/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>

#include "pqbiharm/quadrature.hpp"

namespace pqbiharm {

const char* to_string(SNumberKind kind) {
    switch (kind) {
        case SNumberKind::isomorphism_lower: return "isomorphism-lower";
        case SNumberKind::approximation_upper: return "approximation-upper";
        default: return "strict-equality";
    }
}

double lq_norm(const std::function<double(double)>& f, double t0, double r,
               const std::vector<double>& breakpoints, double rel_tol) {
    if (!(r >= 1.0)) throw std::invalid_argument("lq_norm: requires r >= 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("lq_norm: requires t0 > 0");
    auto integrand = [&](double t) { return std::pow(std::fabs(f(t)), r); };
    // rough scale pass so near-zero panels get a sensible absolute cutoff
    double scale = 0.0, scale_err = 0.0;
    detail::gk15(integrand, 0.0, t0, scale, scale_err);
    const double abs_tol = std::max(1e-300, 0.05 * rel_tol * std::fabs(scale));
    auto res = integrate_adaptive(integrand, 0.0, t0, breakpoints, 0.1 * rel_tol, abs_tol, 40);
    if (!res.converged)
        throw std::runtime_error("lq_norm: quadrature failed to meet the requested tolerance");
    return std::pow(res.value, 1.0 / r);
}

namespace {

// Norms of an eigenfunction and of its second derivative, with quadrature panels
// split at the interior zeros where fractional powers lose smoothness.
struct EigNorms {
    double f_q;
    double fpp_p;
};

EigNorms eigenfunction_norms(const Eigenfunction& eig, double rel_tol = 1e-10) {
    const auto zeros = eig.interior_zeros();
    const double t0 = eig.t0();
    const double p = eig.params().p;
    const double q = eig.params().q;
    EigNorms out;
    out.f_q = lq_norm([&](double t) { return eig.value(t); }, t0, q, zeros, rel_tol);
    out.fpp_p =
        lq_norm([&](double t) { return eig.second_derivative(t); }, t0, p, zeros, rel_tol);
    return out;
}

}  // namespace

SpectralCouple normalize_spectral(const Eigenfunction& eig) {
    const double slope = eig.slope_at_origin();
    if (eig.amplitude() == 0.0 || slope == 0.0)
        throw std::invalid_argument("normalize_spectral: degenerate eigenfunction");
    const EigNorms norms = eigenfunction_norms(eig);
    const double scale = (slope > 0.0 ? 1.0 : -1.0) / norms.fpp_p;
    const double lambda = std::pow(norms.fpp_p / norms.f_q, eig.params().q);
    Eigenfunction f = eig.scaled(scale);
    // the quadrature ratio is the authoritative eigenvalue for the couple
    Eigenfunction couple_f(ProblemParams(f.params().p, f.params().q, lambda, f.t0()),
                           f.index(), f.arch_ptr(), f.arch_length(), f.amplitude(), f.rate(),
                           f.arch_alpha(), f.arch_beta());
    return SpectralCouple{std::move(couple_f), lambda, eig.index()};
}

namespace {

std::map<std::pair<double, double>, double>& lambda1_cache() {
    static std::map<std::pair<double, double>, double> cache;
    return cache;
}
std::mutex lambda1_mutex;

}  // namespace

double lambda1_unit(double p, double q) {
    {
        std::lock_guard<std::mutex> lock(lambda1_mutex);
        auto it = lambda1_cache().find({p, q});
        if (it != lambda1_cache().end()) return it->second;
    }
    const Eigenfunction eig = solve_eigenproblem(p, q, 1.0, 1.0);
    const double lam = normalize_spectral(eig).lambda;
    std::lock_guard<std::mutex> lock(lambda1_mutex);
    lambda1_cache().emplace(std::make_pair(p, q), lam);   // idempotent on duplicate keys
    return lam;
}

SpectralCouple spectral_chain(const SpectralCouple& couple1, int n, double t0) {
    if (couple1.n != 1 || couple1.f.t0() != 1.0)
        throw std::invalid_argument("spectral_chain: couple1 must be the n=1 couple on [0,1]");
    Eigenfunction f_n = nth_eigenfunction(couple1.f, n, t0);
    const double sn = f_n.lambda();
    return SpectralCouple{std::move(f_n), sn, n};
}

double embedding_norm(double p, double q, double t0) {
    if (!(t0 > 0.0)) throw std::invalid_argument("embedding_norm: requires t0 > 0");
    const double lam1 = lambda1_unit(p, q);
    return std::pow(t0, 1.0 / q - 1.0 / p + 2.0) * std::pow(lam1, -1.0 / q);
}

double closed_form_norm_qpprime(double p) {
    if (!(p > 1.0)) throw std::domain_error("closed_form_norm_qpprime: requires p > 1");
    const double pc = p / (p - 1.0);
    return std::pow(2.0 / pc, 2.0 / pc) *
           std::pow(beta_function(0.5, (pc + 1.0) / pc), 1.0 / pc - 1.0 / p);
}

double ClosedFormEigenpair::value(double x) const {
    return c * sin_rs(gentrig, pi_rs(gentrig) * n * x / t0);
}

double ClosedFormEigenpair::derivative(double x) const {
    return c * (pi_rs(gentrig) * n / t0) * cos_rs(gentrig, pi_rs(gentrig) * n * x / t0);
}

double ClosedFormEigenpair::second_derivative(double x) const {
    const double rho = pi_rs(gentrig) * n / t0;
    const double pc = gentrig.s;   // the pair is (2, p')
    return -c * rho * rho * (pc / 2.0) * spow(sin_rs(gentrig, rho * x), pc);
}

ClosedFormEigenpair closed_form_lambda(double p, int n, double c, double t0) {
    if (!(p > 1.0)) throw std::domain_error("closed_form_lambda: requires p > 1");
    if (n < 1 || !(c > 0.0) || !(t0 > 0.0))
        throw std::invalid_argument("closed_form_lambda: requires n >= 1, c > 0, t0 > 0");
    const double pc = p / (p - 1.0);
    GenTrigParams gt(2.0, pc);
    const double pi2 = pi_rs(gt);
    const double lambda =
        std::pow(pc * pi2 * pi2 * n * n / (2.0 * t0 * t0), p) * std::pow(c, p - pc);
    return ClosedFormEigenpair{lambda, c, n, t0, gt};
}

std::vector<SNumberReport> s_number_bounds(double p, double q, double t0, int n_max) {
    if (n_max < 1) throw std::invalid_argument("s_number_bounds: requires n_max >= 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("s_number_bounds: requires t0 > 0");
    const double lam1 = lambda1_unit(p, q);
    const SNumberKind kind = p < q   ? SNumberKind::isomorphism_lower
                             : q < p ? SNumberKind::approximation_upper
                                     : SNumberKind::strict_equality;
    std::vector<SNumberReport> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double sn =
            std::pow(n, 2.0 * q) * std::pow(t0, q / p - 1.0 - 2.0 * q) * lam1;
        const double value = std::pow(t0, 1.0 / q + 2.0 - 1.0 / p) /
                             (static_cast<double>(n) * n * std::pow(lam1, 1.0 / q));
        const double via_sn = std::pow(sn, -1.0 / q);
        if (std::fabs(value - via_sn) > 1e-10 * value)
            throw std::logic_error("s_number_bounds: route mismatch between sn_n and value");
        out.push_back({p, q, t0, n, sn, value, kind});
    }
    return out;
}

void write_snumbers_csv(std::ostream& os, const std::vector<SNumberReport>& reports) {
    os << "n,sn_n,value,kind\n";
    char buf[128];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "%d,%.16e,%.16e,%s\n", r.n, r.sn_n, r.value,
                      to_string(r.kind));
        os << buf;
    }
}

double lp_ratio_extrema(double p, double q, int n) {
    if (!(p > 1.0) || !(q > 1.0))
        throw std::domain_error("lp_ratio_extrema: requires p, q > 1");
    if (n < 1) throw std::invalid_argument("lp_ratio_extrema: requires n >= 1");
    return std::pow(static_cast<double>(n), 1.0 / q - 1.0 / p);
}

double first_order_norm(double r, double s, double t0) {
    if (!(r > 1.0) || !(s > 1.0))
        throw std::domain_error("first_order_norm: requires r, s > 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("first_order_norm: requires t0 > 0");
    const double rc = r / (r - 1.0);
    return std::pow(t0, 1.0 / rc + 1.0 / s) * std::pow(rc + s, 1.0 / r - 1.0 / s) *
           std::pow(rc, 1.0 / s) * std::pow(s, 1.0 / rc) /
           (2.0 * beta_function(1.0 / s, 1.0 / rc));
}

double mean_zero_norm(double p, double t0) {
    if (!(p > 1.0)) throw std::domain_error("mean_zero_norm: requires p > 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("mean_zero_norm: requires t0 > 0");
    const double pc = p / (p - 1.0);
    return std::pow(t0, 1.0 / pc + 0.5) * std::pow(pc + 2.0, 1.0 / p - 0.5) *
           std::sqrt(pc) / (std::pow(2.0, 1.0 / p) * beta_function(0.5, 1.0 / pc));
}

}  // namespace pqbiharm
