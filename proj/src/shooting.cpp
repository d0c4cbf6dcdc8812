#include "pqbiharm/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pqbiharm {

namespace {

constexpr double kMismatchTol = 1e-12;   // |t_u - t_w| target for the beta bisection

bool in_cone(const StateVec& y) {
    const bool plus = y.u1 >= 0.0 && y.u2 > 0.0 && y.w1 <= 0.0 && y.w2 < 0.0;
    const bool minus = y.u1 <= 0.0 && y.u2 < 0.0 && y.w1 >= 0.0 && y.w2 > 0.0;
    return plus || minus;
}

struct Shot {
    Mismatch m;
    Trajectory traj;
};

Shot shoot(const ProblemParams& params, double alpha, double beta,
           const IntegrateOptions& opts) {
    double horizon = 10.0;
    Shot shot{{}, {}};
    for (int tries = 0; tries <= 5; ++tries) {
        shot.traj = integrate(params, {0.0, alpha, 0.0, beta}, horizon, opts);
        shot.m.t_u = shot.traj.first_event_time(0);
        shot.m.t_w = shot.traj.first_event_time(2);
        if (shot.m.both()) return shot;
        if (shot.traj.truncated_at_threshold) return shot;       // one-signed up to blow-up
        if (in_cone(shot.traj.nodes.back().y)) return shot;      // monotone, will never cross
        horizon *= 2.0;
    }
    return shot;
}

}  // namespace

IntegrateOptions shooting_defaults() {
    IntegrateOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    return opts;
}

double Mismatch::value() const {
    if (!both())
        throw std::runtime_error(
            "mismatch: no zero found (component one-signed up to the blow-up point)");
    return *t_u - *t_w;
}

Mismatch mismatch(const ProblemParams& params, double alpha, double beta,
                  const IntegrateOptions& opts) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("mismatch: requires alpha > 0 and beta > 0");
    return shoot(params, alpha, beta, opts).m;
}

namespace {

// Sign of g = t_u - t_w with the cone cases mapped to +/-inf: a missing u1 zero means
// beta is too small (g = +inf), a missing w1 zero means beta is too large (g = -inf).
double mismatch_signed(const Mismatch& m) {
    if (m.both()) return *m.t_u - *m.t_w;
    if (!m.t_u.has_value() && m.t_w.has_value())
        return std::numeric_limits<double>::infinity();
    if (m.t_u.has_value() && !m.t_w.has_value())
        return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ShootingResult solve_first(double p, double q, double lambda, const IntegrateOptions& opts) {
    const ProblemParams params(p, q, lambda, 1.0);
    const double alpha = 1.0;

    // geometric bracket scan: g is nonincreasing in beta
    double lo = 0.0, hi = 0.0;
    double g_lo = 0.0, g_hi = 0.0;
    for (int k = -8; k <= 8; ++k) {
        const double b = std::pow(10.0, k);
        const double g = mismatch_signed(shoot(params, alpha, b, opts).m);
        if (std::isnan(g)) continue;
        if (g > 0.0) {
            lo = b;
            g_lo = g;
        } else {
            hi = b;
            g_hi = g;
            break;
        }
    }
    if (lo == 0.0 || hi == 0.0)
        throw std::runtime_error(
            "solve_first: bracket scan over beta in [1e-8, 1e8] found no sign change");

    Shot best{{}, {}};
    double best_g = std::numeric_limits<double>::infinity();
    double best_beta = 0.0;
    auto bisect = [&](const IntegrateOptions& run_opts) {
        best_g = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 240; ++it) {
            double b;
            if (std::isfinite(g_lo) && std::isfinite(g_hi) && g_hi != g_lo) {
                b = hi - g_hi * (hi - lo) / (g_hi - g_lo);   // secant, safeguarded below
                const double w = hi - lo;
                if (!(b > lo + 0.05 * w && b < hi - 0.05 * w)) b = 0.5 * (lo + hi);
            } else {
                b = 0.5 * (lo + hi);
            }
            Shot s = shoot(params, alpha, b, run_opts);
            const double g = mismatch_signed(s.m);
            if (std::isnan(g))
                throw std::runtime_error("solve_first: lost both zeros in bracket");
            if (std::isfinite(g) && std::fabs(g) < best_g) {
                best_g = std::fabs(g);
                best = std::move(s);
                best_beta = b;
            }
            if (best_g <= kMismatchTol) break;
            if (g > 0.0) {
                lo = b;
                g_lo = g;
            } else {
                hi = b;
                g_hi = g;
            }
            if (hi - lo <= 1e-16 * hi) break;
        }
    };
    bisect(opts);
    if (!best.m.both())
        throw std::runtime_error("solve_first: bisection failed to produce both zeros");

    // refinement pass: the event positions (hence t1 and beta) inherit the integration
    // tolerance, amplified by the non-Lipschitz tail for exponents below 2; re-bisect
    // in a narrow bracket with a much tighter integrator
    IntegrateOptions fine = opts;
    fine.rel_tol = std::min(opts.rel_tol, 3e-13);
    fine.abs_tol = std::min(opts.abs_tol, 1e-15);
    lo = best_beta * (1.0 - 1e-4);
    hi = best_beta * (1.0 + 1e-4);
    g_lo = mismatch_signed(shoot(params, alpha, lo, fine).m);
    g_hi = mismatch_signed(shoot(params, alpha, hi, fine).m);
    if (g_lo > 0.0 && g_hi < 0.0) bisect(fine);
    if (!best.m.both())
        throw std::runtime_error("solve_first: refinement lost the simultaneous zero");

    const double t1 = 0.5 * (*best.m.t_u + *best.m.t_w);
    const double residual = std::fabs(best.traj.component(0, t1)) +
                            std::fabs(best.traj.component(2, t1));

    // positivity of the arch interior
    for (int i = 1; i < 64; ++i) {
        const double t = t1 * i / 64.0;
        if (!(best.traj.component(0, t) > 0.0 && best.traj.component(2, t) > 0.0))
            throw std::runtime_error("solve_first: arch not positive on (0, t1)");
    }

    // clean arch on exactly [0, t1]; the exact solution ends at (0, -alpha, 0, -beta)
    // by the half-period symmetry, so snap the terminal node onto that state.
    // Short segments keep the cubic dense output at the 1e-10 level in value.
    IntegrateOptions arch_opts = fine;
    const double cap = t1 / 512.0;
    if (arch_opts.max_step <= 0.0 || arch_opts.max_step > cap) arch_opts.max_step = cap;
    Trajectory arch = integrate(params, {0.0, alpha, 0.0, best_beta}, t1, arch_opts);
    const StateVec terminal{0.0, -alpha, 0.0, -best_beta};
    if (!arch.nodes.empty() && arch.nodes.back().t >= t1 * (1.0 - 1e-12)) {
        arch.nodes.back() = {t1, terminal, vector_field(params, terminal)};
    } else {
        arch.nodes.push_back({t1, terminal, vector_field(params, terminal)});
    }
    // drop the boundary-zero events at the right endpoint
    while (!arch.events.empty() && arch.events.back().t > t1 * (1.0 - 1e-9))
        arch.events.pop_back();

    ShootingResult out{ProblemParams(p, q, lambda, t1), alpha, best_beta, t1, residual,
                       std::make_shared<Trajectory>(std::move(arch))};
    return out;
}

// ---------------------------------------------------------------------------
// Rescaling
// ---------------------------------------------------------------------------

RescaledSolution rescale(const ShootingResult& result, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("rescale: requires a > 0 and b > 0");
    const double p = result.params.p;
    const double q = result.params.q;
    const double lam = result.params.lambda * std::pow(a, p - q) * std::pow(b, 2.0 * p);
    RescaledSolution out{ProblemParams(p, q, lam, result.t1 / b),
                         a * b * result.alpha,
                         std::pow(a, p - 1.0) * std::pow(b, 2.0 * p - 1.0) * result.beta,
                         a,
                         b,
                         result.trajectory};
    return out;
}

double RescaledSolution::value(double t) const { return a * base->component(0, b * t); }

StateVec RescaledSolution::state(double t) const {
    const StateVec y = base->eval(b * t);
    const double p = params.p;
    return {a * y.u1, a * b * y.u2, std::pow(a, p - 1.0) * std::pow(b, 2.0 * p - 2.0) * y.w1,
            std::pow(a, p - 1.0) * std::pow(b, 2.0 * p - 1.0) * y.w2};
}

// ---------------------------------------------------------------------------
// Eigenfunction
// ---------------------------------------------------------------------------

namespace {

// Reduce x into [0, 2L) for the odd 2L-periodic arch extension.
double reduce_period(double x, double L) {
    const double period = 2.0 * L;
    double xi = std::fmod(x, period);
    if (xi < 0.0) xi += period;
    return xi;
}

}  // namespace

Eigenfunction::Eigenfunction(ProblemParams params, int n,
                             std::shared_ptr<const Trajectory> arch, double arch_len,
                             double amp, double rate, double arch_alpha, double arch_beta)
    : params_(params),
      n_(n),
      arch_(std::move(arch)),
      arch_len_(arch_len),
      amp_(amp),
      rate_(rate),
      arch_alpha_(arch_alpha),
      arch_beta_(arch_beta) {
    if (n_ < 1) throw std::invalid_argument("Eigenfunction: requires n >= 1");
}

double Eigenfunction::value(double t) const {
    const double xi = reduce_period(rate_ * t, arch_len_);
    if (xi <= arch_len_) return amp_ * arch_->component(0, xi);
    return -amp_ * arch_->component(0, 2.0 * arch_len_ - xi);
}

double Eigenfunction::derivative(double t) const {
    const double xi = reduce_period(rate_ * t, arch_len_);
    if (xi <= arch_len_) return amp_ * rate_ * arch_->component(1, xi);
    return amp_ * rate_ * arch_->component(1, 2.0 * arch_len_ - xi);
}

double Eigenfunction::second_derivative(double t) const {
    const double pc = params_.p_conj();
    const double xi = reduce_period(rate_ * t, arch_len_);
    if (xi <= arch_len_) return -amp_ * rate_ * rate_ * spow(arch_->component(2, xi), pc);
    return amp_ * rate_ * rate_ * spow(arch_->component(2, 2.0 * arch_len_ - xi), pc);
}

double Eigenfunction::slope_at_origin() const { return amp_ * rate_ * arch_alpha_; }

double Eigenfunction::curvature_rate_at_origin() const {
    // w2 transforms as a^{p-1} b^{2p-1} under u(t) -> a u(b t)
    return std::pow(std::fabs(amp_), params_.p - 1.0) *
           std::pow(rate_, 2.0 * params_.p - 1.0) * arch_beta_ * (amp_ < 0.0 ? -1.0 : 1.0);
}

std::vector<double> Eigenfunction::interior_zeros() const {
    std::vector<double> out;
    for (int j = 1; j < n_; ++j) out.push_back(params_.t0 * j / n_);
    return out;
}

Eigenfunction Eigenfunction::scaled(double c) const {
    if (c == 0.0) throw std::invalid_argument("Eigenfunction::scaled: requires c != 0");
    const double lam = params_.lambda * std::pow(std::fabs(c), params_.p - params_.q);
    Eigenfunction out(ProblemParams(params_.p, params_.q, lam, params_.t0), n_, arch_,
                      arch_len_, amp_ * c, rate_, arch_alpha_, arch_beta_);
    return out;
}

void Eigenfunction::write_csv(std::ostream& os, int sample_count) const {
    if (sample_count < 2) throw std::invalid_argument("write_csv: need >= 2 samples");
    os << "t,u,du,d2u\n";
    char buf[160];
    for (int i = 0; i < sample_count; ++i) {
        const double t = params_.t0 * static_cast<double>(i) / (sample_count - 1);
        std::snprintf(buf, sizeof(buf), "%.16e,%.16e,%.16e,%.16e\n", t, value(t),
                      derivative(t), second_derivative(t));
        os << buf;
    }
}

Eigenfunction solve_eigenproblem(double p, double q, double t0,
                                 std::optional<double> lambda_target,
                                 const IntegrateOptions& opts) {
    if (!(t0 > 0.0)) throw std::invalid_argument("solve_eigenproblem: requires t0 > 0");
    if (p == q) {
        // homogeneous case: lambda is determined by t0, amplitude is free
        const ShootingResult ref = solve_first(p, q, 1.0, opts);
        const double b = ref.t1 / t0;
        const double lam = std::pow(b, 2.0 * p);
        return Eigenfunction(ProblemParams(p, q, lam, t0), 1, ref.trajectory, ref.t1, 1.0, b,
                             ref.alpha, ref.beta);
    }
    const double lam = lambda_target.value_or(1.0);
    if (!(lam > 0.0)) throw std::invalid_argument("solve_eigenproblem: requires lambda > 0");
    const ShootingResult ref = solve_first(p, q, lam, opts);
    // map the arch [0, t1] onto [0, t0] while keeping the eigenvalue fixed:
    // b = t1/t0 and a = b^{-2p/(p-q)} cancel in lambda~ = lambda a^{p-q} b^{2p}
    const double b = ref.t1 / t0;
    const double a = std::pow(b, -2.0 * p / (p - q));
    return Eigenfunction(ProblemParams(p, q, lam, t0), 1, ref.trajectory, ref.t1, a, b,
                         ref.alpha, ref.beta);
}

PeriodicExtension::PeriodicExtension(Eigenfunction eig) : eig_(std::move(eig)) {
    if (eig_.index() != 1)
        throw std::invalid_argument("PeriodicExtension: requires an n=1 eigenfunction");
}

PeriodicExtension extend_periodic(const Eigenfunction& eig) { return PeriodicExtension(eig); }

Eigenfunction nth_eigenfunction(const Eigenfunction& eig1, int n, double t0) {
    if (n < 1) throw std::invalid_argument("nth_eigenfunction: requires n >= 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("nth_eigenfunction: requires t0 > 0");
    if (eig1.index() != 1 || eig1.t0() != 1.0)
        throw std::invalid_argument("nth_eigenfunction: eig1 must be the n=1 couple on [0,1]");
    const double p = eig1.params().p;
    const double q = eig1.params().q;
    const double lam1 = eig1.lambda();
    const double sn = std::pow(n, 2.0 * q) * std::pow(t0, q / p - 1.0 - 2.0 * q) * lam1;
    const double amp = std::pow(t0, 2.0 - 1.0 / p) * eig1.amplitude() / (n * n);
    const double rate = n * eig1.rate() / t0;
    return Eigenfunction(ProblemParams(p, q, sn, t0), n, eig1.arch_ptr(), eig1.arch_length(),
                         amp, rate, eig1.arch_alpha(), eig1.arch_beta());
}

}  // namespace pqbiharm
