#include "pqbiharm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pqbiharm {

namespace {

constexpr double kEventValueTol = 1e-11;   // refined |interpolated value| at an event
constexpr long kMaxSteps = 20'000'000;

StateVec axpy(const StateVec& y, double a, const StateVec& k) {
    return {y.u1 + a * k.u1, y.u2 + a * k.u2, y.w1 + a * k.w1, y.w2 + a * k.w2};
}

}  // namespace

ProblemParams::ProblemParams(double p_, double q_, double lambda_, double t0_)
    : p(p_), q(q_), lambda(lambda_), t0(t0_) {
    if (!(p > 1.0) || !(q > 1.0))
        throw std::domain_error("ProblemParams: requires p > 1 and q > 1");
    if (!(lambda > 0.0)) throw std::domain_error("ProblemParams: requires lambda > 0");
    if (!(t0 > 0.0)) throw std::domain_error("ProblemParams: requires t0 > 0");
}

double StateVec::abs_sum() const {
    return std::fabs(u1) + std::fabs(u2) + std::fabs(w1) + std::fabs(w2);
}

double spow(double x, double r) {
    if (!(r > 1.0)) throw std::domain_error("spow: requires r > 1");
    if (x == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(x), r - 1.0), x);
}

StateVec vector_field(const ProblemParams& params, const StateVec& s) {
    return {s.u2, -spow(s.w1, params.p_conj()), s.w2, -params.lambda * spow(s.u1, params.q)};
}

// ---------------------------------------------------------------------------
// Dense output
// ---------------------------------------------------------------------------

namespace {

// Cubic Hermite on [t0,t1] from endpoint values and derivatives.
double hermite(double t, double t0, double t1, double y0, double y1, double f0, double f1) {
    const double h = t1 - t0;
    const double th = (t - t0) / h;
    const double th2 = th * th;
    const double th3 = th2 * th;
    return (2.0 * th3 - 3.0 * th2 + 1.0) * y0 + (th3 - 2.0 * th2 + th) * h * f0 +
           (-2.0 * th3 + 3.0 * th2) * y1 + (th3 - th2) * h * f1;
}

}  // namespace

StateVec Trajectory::eval(double t) const {
    if (nodes.empty()) throw std::logic_error("Trajectory::eval: empty trajectory");
    if (nodes.size() == 1) return nodes.front().y;
    // clamp to the covered interval
    if (t <= nodes.front().t) t = nodes.front().t;
    if (t >= nodes.back().t) t = nodes.back().t;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double v, const TrajectoryNode& n) { return v < n.t; });
    std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    if (hi == 0) hi = 1;
    if (hi >= nodes.size()) hi = nodes.size() - 1;
    const TrajectoryNode& a = nodes[hi - 1];
    const TrajectoryNode& b = nodes[hi];
    StateVec out;
    for (int i = 0; i < 4; ++i)
        out[i] = hermite(t, a.t, b.t, a.y[i], b.y[i], a.f[i], b.f[i]);
    return out;
}

std::optional<double> Trajectory::first_event_time(int component) const {
    for (const auto& e : events)
        if (e.component == component) return e.t;
    return std::nullopt;
}

std::vector<double> Trajectory::event_times(int component) const {
    std::vector<double> out;
    for (const auto& e : events)
        if (e.component == component) out.push_back(e.t);
    return out;
}

void Trajectory::write_samples_csv(std::ostream& os, int sample_count) const {
    if (sample_count < 2) throw std::invalid_argument("write_samples_csv: need >= 2 samples");
    os << "t,u1,u2,w1,w2\n";
    char buf[192];
    const double a = start_time(), b = end_time();
    for (int i = 0; i < sample_count; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / (sample_count - 1);
        const StateVec y = eval(t);
        std::snprintf(buf, sizeof(buf), "%.16e,%.16e,%.16e,%.16e,%.16e\n", t, y.u1, y.u2, y.w1,
                      y.w2);
        os << buf;
    }
}

void Trajectory::write_events_csv(std::ostream& os) const {
    os << "component,time,direction\n";
    char buf[96];
    static const char* names[4] = {"u1", "u2", "w1", "w2"};
    for (const auto& e : events) {
        std::snprintf(buf, sizeof(buf), "%s,%.16e,%d\n", names[e.component], e.t, e.direction);
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// RK5(4) integrator (Dormand-Prince pair) with event location
// ---------------------------------------------------------------------------

namespace {

struct StepResult {
    StateVec y;       // solution at t+h
    StateVec f;       // field at t+h (FSAL stage)
    double err;       // scaled error norm, accept when <= 1
};

class Dopri5 {
  public:
    Dopri5(const ProblemParams& params, const IntegrateOptions& opts)
        : params_(params), opts_(opts) {}

    StepResult step(double t, const StateVec& y, const StateVec& f1, double h) const {
        (void)t;   // autonomous field
        const StateVec k1 = f1;
        const StateVec k2 = eval(axpy(y, h * a21, k1));
        StateVec z = axpy(y, h * a31, k1);
        z = axpy(z, h * a32, k2);
        const StateVec k3 = eval(z);
        z = axpy(y, h * a41, k1);
        z = axpy(z, h * a42, k2);
        z = axpy(z, h * a43, k3);
        const StateVec k4 = eval(z);
        z = axpy(y, h * a51, k1);
        z = axpy(z, h * a52, k2);
        z = axpy(z, h * a53, k3);
        z = axpy(z, h * a54, k4);
        const StateVec k5 = eval(z);
        z = axpy(y, h * a61, k1);
        z = axpy(z, h * a62, k2);
        z = axpy(z, h * a63, k3);
        z = axpy(z, h * a64, k4);
        z = axpy(z, h * a65, k5);
        const StateVec k6 = eval(z);
        z = axpy(y, h * b1, k1);
        z = axpy(z, h * b3, k3);
        z = axpy(z, h * b4, k4);
        z = axpy(z, h * b5, k5);
        z = axpy(z, h * b6, k6);
        const StateVec ynew = z;
        const StateVec k7 = eval(ynew);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opts_.abs_tol + opts_.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            const double r = e / sc;
            err += r * r;
        }
        return {ynew, k7, std::sqrt(0.25 * err)};
    }

    StateVec eval(const StateVec& y) const { return vector_field(params_, y); }

    double initial_step(const StateVec& y, const StateVec& f, double horizon) const {
        double d0 = 0.0, d1 = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double sc = opts_.abs_tol + opts_.rel_tol * std::fabs(y[i]);
            d0 = std::max(d0, std::fabs(y[i]) / sc);
            d1 = std::max(d1, std::fabs(f[i]) / sc);
        }
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, 0.1 * horizon);
        // one Euler probe to bound the second derivative
        const StateVec f2 = eval(axpy(y, h, f));
        double d2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double sc = opts_.abs_tol + opts_.rel_tol * std::fabs(y[i]);
            d2 = std::max(d2, std::fabs(f2[i] - f[i]) / sc / h);
        }
        const double dm = std::max(d1, d2);
        const double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h * 1e-3);
        return std::min({100.0 * h, h1, 0.1 * horizon});
    }

  private:
    const ProblemParams& params_;
    const IntegrateOptions& opts_;

    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
};

// Hermite value of one component over a segment.
double seg_value(const TrajectoryNode& a, const TrajectoryNode& b, int comp, double t) {
    return hermite(t, a.t, b.t, a.y[comp], b.y[comp], a.f[comp], b.f[comp]);
}

// Refine a bracketed zero of the dense output; bisection to |value| <= tol,
// then one safeguarded secant polish.
double refine_zero(const TrajectoryNode& a, const TrajectoryNode& b, int comp, double lo,
                   double hi, double vlo, double vhi) {
    double mid = 0.5 * (lo + hi), vmid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        vmid = seg_value(a, b, comp, mid);
        if (std::fabs(vmid) <= kEventValueTol) break;
        if ((vlo < 0.0) == (vmid < 0.0)) {
            lo = mid;
            vlo = vmid;
        } else {
            hi = mid;
            vhi = vmid;
        }
        if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(hi)))
            break;
    }
    if (vhi != vlo) {
        const double sec = hi - vhi * (hi - lo) / (vhi - vlo);
        if (sec > lo && sec < hi && std::fabs(seg_value(a, b, comp, sec)) <= std::fabs(vmid))
            return sec;
    }
    return mid;
}

// Earliest sign change of `comp` strictly inside the segment; subsamples first so
// closely spaced double crossings of the cubic are not missed.
std::optional<std::pair<double, int>> first_zero_in_segment(const TrajectoryNode& a,
                                                            const TrajectoryNode& b, int comp) {
    constexpr int kScan = 8;
    double prev_t = a.t;
    double prev_v = a.y[comp];
    if (prev_v == 0.0) {
        // node sits exactly on zero (initial data); look for the component leaving zero
        prev_t = a.t + (b.t - a.t) / kScan * 1e-3;
        prev_v = seg_value(a, b, comp, prev_t);
        if (prev_v == 0.0) return std::nullopt;
    }
    for (int i = 1; i <= kScan; ++i) {
        const double t = a.t + (b.t - a.t) * i / kScan;
        const double v = i == kScan ? b.y[comp] : seg_value(a, b, comp, t);
        if (v == 0.0) return std::make_pair(t, prev_v > 0.0 ? -1 : 1);
        if ((v < 0.0) != (prev_v < 0.0)) {
            const double tz = refine_zero(a, b, comp, prev_t, t, prev_v, v);
            return std::make_pair(tz, prev_v > 0.0 ? -1 : 1);
        }
        prev_t = t;
        prev_v = v;
    }
    return std::nullopt;
}

}  // namespace

Trajectory integrate(const ProblemParams& params, const StateVec& init, double horizon,
                     const IntegrateOptions& opts) {
    if (!(horizon > 0.0)) throw std::invalid_argument("integrate: requires horizon > 0");
    Trajectory traj;

    if (init.is_zero()) {
        traj.trivial = true;
        traj.nodes.push_back({0.0, init, StateVec{}});
        traj.nodes.push_back({horizon, init, StateVec{}});
        return traj;
    }

    const Dopri5 rk(params, opts);
    const bool split_w1 = opts.split_at_power_singularities && params.p_conj() < 2.0;
    const bool split_u1 = opts.split_at_power_singularities && params.q < 2.0;

    double t = 0.0;
    StateVec y = init;
    StateVec f = rk.eval(y);
    traj.nodes.push_back({t, y, f});

    double h = rk.initial_step(y, f, horizon);
    double forced_h = 0.0;   // >0: next step must not exceed this (event split)
    long nsteps = 0;
    int consecutive_tiny = 0;

    while (t < horizon) {
        if (++nsteps > kMaxSteps) throw std::runtime_error("integrate: step budget exhausted");
        if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
        if (forced_h > 0.0) h = std::min(h, forced_h);
        h = std::min(h, horizon - t);

        const double h_floor = 1e-14 * std::max(horizon, std::fabs(t));
        if (h < h_floor) {
            if (++consecutive_tiny > 50 && y.abs_sum() < 0.5 * opts.blowup_threshold)
                throw std::runtime_error(
                    "integrate: stiffness failure (step-size collapse without norm growth)");
            h = h_floor;
        } else {
            consecutive_tiny = 0;
        }

        const StepResult st = rk.step(t, y, f, h);
        if (!std::isfinite(st.err) || st.err > 1.0) {
            const double fac = std::isfinite(st.err)
                                   ? std::max(0.2, 0.9 * std::pow(st.err, -0.2))
                                   : 0.2;
            h *= fac;
            continue;
        }

        // provisional accepted node
        TrajectoryNode prev = traj.nodes.back();
        TrajectoryNode next{t + h, st.y, st.f};

        // split the step at a non-Lipschitz power zero so the singularity sits on a node
        if (forced_h == 0.0 && (split_w1 || split_u1)) {
            double t_split = std::numeric_limits<double>::infinity();
            if (split_u1) {
                auto z = first_zero_in_segment(prev, next, 0);
                if (z) t_split = std::min(t_split, z->first);
            }
            if (split_w1) {
                auto z = first_zero_in_segment(prev, next, 2);
                if (z) t_split = std::min(t_split, z->first);
            }
            if (std::isfinite(t_split) && t_split > prev.t + 4.0 * h_floor &&
                t_split < next.t - 4.0 * h_floor) {
                forced_h = t_split - prev.t;
                continue;   // re-take this step, truncated at the zero
            }
        }
        forced_h = 0.0;

        traj.nodes.push_back(next);
        t = next.t;
        y = next.y;
        f = next.f;

        // record all component sign changes in the accepted segment
        const TrajectoryNode& a = traj.nodes[traj.nodes.size() - 2];
        const TrajectoryNode& b = traj.nodes.back();
        struct Found { double t; int comp; int dir; };
        std::vector<Found> found;
        for (int comp = 0; comp < 4; ++comp) {
            auto z = first_zero_in_segment(a, b, comp);
            if (z) found.push_back({z->first, comp, z->second});
        }
        std::sort(found.begin(), found.end(),
                  [](const Found& x, const Found& y2) { return x.t < y2.t; });
        for (const auto& e : found) {
            // skip numerically duplicated crossings straddling a split node
            bool dup = false;
            for (auto it2 = traj.events.rbegin(); it2 != traj.events.rend(); ++it2) {
                if (e.t - it2->t > 1e-8 * (1.0 + std::fabs(e.t))) break;
                if (it2->component == e.comp) {
                    dup = true;
                    break;
                }
            }
            if (!dup) traj.events.push_back({e.comp, e.t, e.dir});
        }

        // blow-up threshold truncation
        if (y.abs_sum() >= opts.blowup_threshold) {
            double lo = a.t, hi = b.t;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                StateVec ym;
                for (int i = 0; i < 4; ++i) ym[i] = seg_value(a, b, i, mid);
                if (ym.abs_sum() >= opts.blowup_threshold)
                    hi = mid;
                else
                    lo = mid;
            }
            traj.truncated_at_threshold = true;
            traj.threshold_hit_time = hi;
            // drop events recorded past the hit time
            while (!traj.events.empty() && traj.events.back().t > hi) traj.events.pop_back();
            return traj;
        }

        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(st.err, 1e-10), -0.2)));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Blow-up detection
// ---------------------------------------------------------------------------

namespace {

bool in_monotone_cone(const StateVec& y) {
    const bool plus = y.u1 >= 0.0 && y.u2 > 0.0 && y.w1 <= 0.0 && y.w2 < 0.0;
    const bool minus = y.u1 <= 0.0 && y.u2 < 0.0 && y.w1 >= 0.0 && y.w2 > 0.0;
    return plus || minus;
}

bool any_node_in_cone(const Trajectory& traj) {
    for (const auto& n : traj.nodes)
        if (in_monotone_cone(n.y)) return true;
    return false;
}

}  // namespace

BlowupReport detect_blowup(const ProblemParams& params, const StateVec& init, double threshold,
                           double horizon, const IntegrateOptions& opts) {
    if (!(threshold > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("detect_blowup: requires threshold > 0 and horizon > 0");
    BlowupReport report;
    if (init.is_zero()) {
        report.status = BlowupStatus::trivial;
        return report;
    }

    IntegrateOptions run = opts;
    run.blowup_threshold = threshold;
    Trajectory traj = integrate(params, init, horizon, run);
    report.monotone_cone_entered = any_node_in_cone(traj);
    if (!traj.truncated_at_threshold) {
        report.status = BlowupStatus::none_up_to_horizon;
        return report;
    }
    report.threshold_times.emplace_back(threshold, traj.threshold_hit_time);

    // geometric continuation: thresholds x10 and x100
    for (double factor : {10.0, 100.0}) {
        run.blowup_threshold = threshold * factor;
        Trajectory cont = integrate(params, init, horizon, run);
        report.monotone_cone_entered = report.monotone_cone_entered || any_node_in_cone(cont);
        if (!cont.truncated_at_threshold) {
            report.status = BlowupStatus::none_up_to_horizon;
            return report;
        }
        report.threshold_times.emplace_back(run.blowup_threshold, cont.threshold_hit_time);
    }

    const double t1 = report.threshold_times[0].second;
    const double t2 = report.threshold_times[1].second;
    const double t3 = report.threshold_times[2].second;
    const double d1 = t2 - t1;
    const double d2 = t3 - t2;
    // Power-law blow-up gives geometrically shrinking gaps; (near-)constant gaps
    // mean at-most-exponential growth, i.e. no finite-time singularity in sight.
    if (!(d1 > 0.0) || !(d2 > 0.0) || d1 - d2 <= 0.05 * d1) {
        report.status = BlowupStatus::none_up_to_horizon;
        return report;
    }
    const double t_hat = t3 + d2 * d2 / (d1 - d2);
    report.t_inf_estimate = t_hat;
    report.bracket = std::make_pair(t3, t_hat + (t_hat - t3));
    report.status =
        t_hat <= horizon ? BlowupStatus::finite_detected : BlowupStatus::none_up_to_horizon;
    return report;
}

// ---------------------------------------------------------------------------
// Trajectory comparison (ordering margins)
// ---------------------------------------------------------------------------

double ComparisonReport::min_margin() const {
    return std::min(std::min(u_order_margin, w_order_margin),
                    std::min(u_rate_margin, w_rate_margin));
}

ComparisonReport compare_trajectories(const ProblemParams& params, double alpha1, double beta1,
                                      double alpha2, double beta2, double t1, int grid_points,
                                      const IntegrateOptions& opts) {
    if (!(alpha2 <= alpha1 && beta1 <= beta2))
        throw std::invalid_argument(
            "compare_trajectories: requires alpha2 <= alpha1 and beta1 <= beta2");
    if (grid_points < 2) throw std::invalid_argument("compare_trajectories: grid too small");

    const Trajectory a = integrate(params, {0.0, alpha1, 0.0, beta1}, t1, opts);
    const Trajectory b = integrate(params, {0.0, alpha2, 0.0, beta2}, t1, opts);
    if (a.truncated_at_threshold || b.truncated_at_threshold)
        throw std::invalid_argument("compare_trajectories: trajectory not finite on [0,t1]");

    ComparisonReport report;
    double u_min = std::numeric_limits<double>::infinity();
    double w_min = u_min, ur_min = u_min, wr_min = u_min;
    double worst = u_min;
    double worst_t = 0.0;
    for (int i = 0; i <= grid_points - 1; ++i) {
        const double t = t1 * static_cast<double>(i) / (grid_points - 1);
        const StateVec ya = a.eval(t);
        const StateVec yb = b.eval(t);
        const double mu = std::min(ya.u1 - yb.u1, ya.u2 - yb.u2);
        const double mw = std::min(yb.w1 - ya.w1, yb.w2 - ya.w2);
        const double mur = (ya.u1 - yb.u1) - (alpha1 - alpha2) * t;
        const double mwr = (yb.w1 - ya.w1) - (beta2 - beta1) * t;
        u_min = std::min(u_min, mu);
        w_min = std::min(w_min, mw);
        ur_min = std::min(ur_min, mur);
        wr_min = std::min(wr_min, mwr);
        const double local = std::min(std::min(mu, mw), std::min(mur, mwr));
        if (local < worst) {
            worst = local;
            worst_t = t;
        }
    }
    report.u_order_margin = u_min;
    report.w_order_margin = w_min;
    report.u_rate_margin = ur_min;
    report.w_rate_margin = wr_min;
    if (worst < -1e-9) report.violation_time = worst_t;
    return report;
}

}  // namespace pqbiharm
