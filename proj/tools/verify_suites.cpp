#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "pqbiharm/dynamics.hpp"
#include "pqbiharm/gentrig.hpp"
#include "pqbiharm/quadrature.hpp"
#include "pqbiharm/shooting.hpp"
#include "pqbiharm/spectral.hpp"

namespace pqbiharm::verify {

namespace {

using std::numbers::pi;

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

void check(std::vector<CheckResult>& out, const std::string& name, bool pass,
           std::string detail) {
    out.push_back({name, pass, std::move(detail)});
}

std::vector<CheckResult> suite_identities() {
    std::vector<CheckResult> out;
    check(out, "identities.beta-half", std::fabs(beta_function(0.5, 0.5) - pi) < 1e-13,
          fmt("B(1/2,1/2)=%.15g", beta_function(0.5, 0.5)));

    for (double r : {1.4, 2.0, 3.0})
        for (double s : {1.6, 2.0, 3.0}) {
            GenTrigParams g(r, s);
            double worst = 0.0;
            for (int i = 0; i <= 48; ++i) {
                const double x = -6.0 + 12.0 * i / 48.0;
                const double sv = std::pow(std::fabs(sin_rs(g, x)), s);
                const double cv = std::pow(std::fabs(cos_rs(g, x)), r);
                worst = std::max(worst, std::fabs(sv + cv - 1.0));
            }
            check(out, fmt("identities.pythagorean-r%.2g-s%.2g", r, s), worst <= 1e-10,
                  fmt("max residual %.2e", worst));

            const double rc = r / (r - 1.0), sc = s / (s - 1.0);
            const double dual = std::fabs(s * pi_rs(r, s) - rc * pi_rs(sc, rc));
            check(out, fmt("identities.duality-r%.2g-s%.2g", r, s),
                  dual <= 1e-12 * s * pi_rs(r, s), fmt("residual %.2e", dual));

            double worst_sum = 0.0;
            for (double t : {0.1, 0.35, 0.6, 0.9})
                worst_sum = std::max(worst_sum, std::fabs(check_sum_formula(r, s, t)));
            check(out, fmt("identities.sum-formula-r%.2g-s%.2g", r, s), worst_sum <= 1e-9,
                  fmt("max residual %.2e", worst_sum));
        }

    for (double p : {1.5, 2.0, 3.0}) {
        const double pc = p / (p - 1.0);
        GenTrigParams g(2.0, pc);
        const double h = 1e-5;
        double worst = 0.0;
        for (int i = 1; i <= 19; ++i) {
            const double x = 2.0 * g.period_quarter * i / 20.0;
            if (std::fabs(x - g.period_quarter) < 0.05) continue;
            const double upp = (cos_rs(g, x + h) - cos_rs(g, x - h)) / (2.0 * h);
            worst = std::max(worst, std::fabs(upp + 0.5 * pc * spow(sin_rs(g, x), pc)));
        }
        check(out, fmt("identities.ode-sin2p-p%.2g", p), worst <= 1e-8,
              fmt("max residual %.2e", worst));
    }

    {
        GenTrigParams g(1.8, 2.6);
        double worst = 0.0;
        for (int i = 0; i <= 24; ++i) {
            const double x = g.period_quarter * i / 25.0;
            worst = std::max(worst, std::fabs(arcsin_rs(g, sin_rs(g, x)) - x));
        }
        check(out, "identities.arcsin-inverts-sin", worst <= 1e-11,
              fmt("max deviation %.2e", worst));
    }
    return out;
}

std::vector<CheckResult> suite_symmetry() {
    std::vector<CheckResult> out;
    for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{1.5, 3.0}, std::pair{2.6, 1.4}}) {
        Eigenfunction e = solve_eigenproblem(p, q, 1.0, 1.0);
        double asym = 0.0, amp = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double t = i / 256.0;
            asym = std::max(asym, std::fabs(e.value(t) - e.value(1.0 - t)));
            amp = std::max(amp, std::fabs(e.value(t)));
        }
        check(out, fmt("symmetry.mirror-p%.2g-q%.2g", p, q), asym <= 1e-8 * amp,
              fmt("sup asymmetry %.2e (amp %.2e)", asym, amp));

        SpectralCouple c1 = normalize_spectral(e);
        Eigenfunction e4 = nth_eigenfunction(c1.f, 4, 1.0);
        double worst_zero = 0.0;
        for (double z : e4.interior_zeros())
            worst_zero = std::max(worst_zero, std::fabs(e4.value(z)));
        check(out, fmt("symmetry.chain-zeros-p%.2g-q%.2g", p, q), worst_zero <= 1e-8,
              fmt("max |u(j t0/4)| = %.2e", worst_zero));
    }
    return out;
}

std::vector<CheckResult> suite_rescaling() {
    std::vector<CheckResult> out;
    ShootingResult base = solve_first(1.8, 2.4, 1.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.5, 2.0);
    IntegrateOptions tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    double worst = 0.0, worst_lambda = 0.0;
    for (int k = 0; k < 5; ++k) {
        const double a = dist(rng), b = dist(rng);
        RescaledSolution s = rescale(base, a, b);
        const double expect =
            base.params.lambda * std::pow(a, 1.8 - 2.4) * std::pow(b, 2.0 * 1.8);
        worst_lambda = std::max(worst_lambda, std::fabs(s.params.lambda - expect) / expect);
        tight.max_step = s.params.t0 / 512.0;
        Trajectory direct =
            integrate(s.params, {0.0, s.alpha, 0.0, s.beta}, s.params.t0, tight);
        for (int i = 0; i <= 64; ++i) {
            const double t = s.params.t0 * i / 64.0;
            worst = std::max(worst, std::fabs(direct.component(0, t) - s.value(t)));
        }
    }
    check(out, "rescaling.reintegration", worst <= 1e-9, fmt("sup deviation %.2e", worst));
    check(out, "rescaling.lambda-consistency", worst_lambda <= 1e-10,
          fmt("max rel deviation %.2e", worst_lambda));
    return out;
}

std::vector<CheckResult> suite_closed_form() {
    std::vector<CheckResult> out;
    for (double p : {1.25, 1.5, 3.0}) {
        const double pc = p / (p - 1.0);
        GenTrigParams g(2.0, pc);
        const double t0 = pi_rs(g);
        Eigenfunction e = solve_eigenproblem(p, pc, t0, std::pow(pc / 2.0, p));
        const double c = e.derivative(0.0);
        double sup = 0.0;
        for (int i = 0; i <= 128; ++i) {
            const double t = t0 * i / 128.0;
            sup = std::max(sup, std::fabs(e.value(t) - c * sin_rs(g, t)));
        }
        check(out, fmt("closed-form.eigenfunction-p%.3g", p), sup <= 1e-6,
              fmt("sup deviation %.2e", sup));

        const double en = embedding_norm(p, pc, t0);
        const double cf = closed_form_norm_qpprime(p);
        check(out, fmt("closed-form.embedding-norm-p%.3g", p),
              std::fabs(en - cf) <= 1e-6 * cf, fmt("formula %.12g vs %.12g", en, cf));

        const double prod = first_order_norm(2.0, pc, t0) * mean_zero_norm(p, t0);
        check(out, fmt("closed-form.factorization-p%.3g", p),
              std::fabs(prod - cf) <= 1e-9 * cf, fmt("N1 N2 = %.12g vs %.12g", prod, cf));
    }
    return out;
}

std::vector<CheckResult> suite_monotonicity() {
    std::vector<CheckResult> out;
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> pq(1.2, 3.2);
    std::uniform_real_distribution<double> d(0.0, 0.4);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        ProblemParams params(pq(rng), pq(rng), 1.0, 1.0);
        for (int j = 0; j < 4; ++j) {
            const double a1 = 1.0 + d(rng), a2 = a1 - d(rng);
            const double b2 = 1.0 + d(rng), b1 = b2 - d(rng);
            ComparisonReport rep = compare_trajectories(params, a1, b1, a2, b2, 0.8);
            worst = std::min(worst, rep.min_margin());
        }
    }
    check(out, "monotonicity.comparison-margins", worst >= -1e-9,
          fmt("min margin %.2e", worst));

    double worst_g = 0.0;
    for (auto [p, q] : {std::pair{1.5, 2.5}, std::pair{2.5, 1.5}}) {
        ProblemParams params(p, q, 1.0, 1.0);
        ShootingResult sr = solve_first(p, q, 1.0);
        Mismatch m1 = mismatch(params, 1.0, 0.9 * sr.beta);
        Mismatch m2 = mismatch(params, 1.0, 0.9 * sr.beta * 1.01);
        if (m1.both() && m2.both()) worst_g = std::max(worst_g, m2.value() - m1.value());
    }
    check(out, "monotonicity.mismatch-nonincreasing", worst_g <= 1e-9,
          fmt("max increase %.2e", worst_g));
    return out;
}

std::vector<CheckResult> suite_appendix() {
    std::vector<CheckResult> out;

    {
        ProblemParams params(4.0 / 3.0, 3.0, 1.0, 1.0);
        BlowupReport rep = detect_blowup(params, {0.0, 1.0, 0.0, -1.0}, 1e8, 20.0);
        check(out, "appendix.blowup-detected-p4/3-q3",
              rep.status == BlowupStatus::finite_detected && rep.t_inf_estimate.has_value(),
              rep.t_inf_estimate ? fmt("t_inf ~ %.6f", *rep.t_inf_estimate)
                                 : std::string("no estimate"));
    }

    // q = p' with beta = -alpha collapses to u'' = u^2; the blow-up time must match
    // the energy-integral value T = int_0^inf (1 + 2u^3/3)^{-1/2} du
    {
        ProblemParams params(1.5, 3.0, 1.0, 1.0);
        BlowupReport rep = detect_blowup(params, {0.0, 1.0, 0.0, -1.0}, 1e8, 20.0);
        auto f1 = [](double u) { return 1.0 / std::sqrt(1.0 + 2.0 * u * u * u / 3.0); };
        auto f2 = [](double tau) { return 2.0 / std::sqrt(std::pow(tau, 6.0) + 2.0 / 3.0); };
        const double t_exact =
            integrate_adaptive(f1, 0.0, 1.0).value + integrate_adaptive(f2, 0.0, 1.0).value;
        const bool ok = rep.status == BlowupStatus::finite_detected &&
                        rep.t_inf_estimate.has_value() &&
                        std::fabs(*rep.t_inf_estimate - t_exact) <= 1e-4;
        check(out, "appendix.blowup-time-p3/2-q3", ok,
              rep.t_inf_estimate
                  ? fmt("t_inf %.8f vs energy integral %.8f", *rep.t_inf_estimate, t_exact)
                  : std::string("no estimate"));
    }

    {
        ProblemParams params(2.5, 1.5, 1.0, 1.0);
        BlowupReport rep = detect_blowup(params, {1.5, 0.5, -1.5, -0.5}, 1e8, 50.0);
        check(out, "appendix.global-existence-p2.5-q1.5",
              rep.status == BlowupStatus::none_up_to_horizon && rep.monotone_cone_entered,
              fmt("status %g, cone %g", static_cast<double>(rep.status),
                  static_cast<double>(rep.monotone_cone_entered)));
    }

    {
        ProblemParams sys1(2.5, 1.2, 1.0, 1.0);
        ProblemParams sys2(2.0, 1.8, 1.0, 1.0);
        StateVec init{1.5, 0.5, -1.5, -0.5};
        Trajectory a = integrate(sys1, init, 3.0);
        Trajectory b = integrate(sys2, init, 3.0);
        double worst = 0.0;
        for (int i = 1; i <= 40; ++i) {
            const double t = 3.0 * i / 40.0;
            const StateVec ya = a.eval(t), yb = b.eval(t);
            worst = std::min({worst, yb.u1 - ya.u1, yb.u2 - ya.u2, ya.w1 - yb.w1,
                              ya.w2 - yb.w2});
        }
        check(out, "appendix.exponent-ordering", worst >= -1e-9,
              fmt("min margin %.2e", worst));
    }
    return out;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"identities", "symmetry", "rescaling", "closed-form", "monotonicity", "appendix"};
}

bool has_suite(const std::string& name) {
    auto names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<CheckResult> run_suite(const std::string& name) {
    if (name == "identities") return suite_identities();
    if (name == "symmetry") return suite_symmetry();
    if (name == "rescaling") return suite_rescaling();
    if (name == "closed-form") return suite_closed_form();
    if (name == "monotonicity") return suite_monotonicity();
    if (name == "appendix") return suite_appendix();
    throw std::invalid_argument("unknown verify suite: " + name);
}

}  // namespace pqbiharm::verify
