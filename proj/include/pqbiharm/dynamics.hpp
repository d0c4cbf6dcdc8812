#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pqbiharm {

/// One instance of the fourth-order problem (|u''|^{p-1}sgn u'')'' = lambda |u|^{q-1}sgn u
/// on [0, t0] with Navier conditions u = u'' = 0 at both endpoints.
struct ProblemParams {
    double p;
    double q;
    double lambda;
    double t0;

    ProblemParams(double p_, double q_, double lambda_, double t0_);
    double p_conj() const { return p / (p - 1.0); }
};

/// State of the equivalent first-order system:
///   u1 = u, u2 = u', w1 = -|u''|^{p-1}sgn u'', w2 = w1'.
struct StateVec {
    double u1 = 0.0;
    double u2 = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;

    double& operator[](int i) {
        switch (i) {
            case 0: return u1;
            case 1: return u2;
            case 2: return w1;
            default: return w2;
        }
    }
    double operator[](int i) const {
        switch (i) {
            case 0: return u1;
            case 1: return u2;
            case 2: return w1;
            default: return w2;
        }
    }
    double abs_sum() const;
    bool is_zero() const { return u1 == 0.0 && u2 == 0.0 && w1 == 0.0 && w2 == 0.0; }
};

/// Signed power |x|^{r-1} sgn(x). Odd in x; spow(spow(x,r), r') = x.
double spow(double x, double r);

/// Right-hand side of the first-order system:
///   u1' = u2, u2' = -spow(w1, p'), w1' = w2, w2' = -lambda spow(u1, q).
StateVec vector_field(const ProblemParams& params, const StateVec& state);

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double blowup_threshold = 1e8;  // sum of |components| that truncates the trajectory
    double max_step = 0.0;          // 0 = unlimited
    // Split accepted steps at refined zeros of w1 (when p' < 2) and u1 (when q < 2),
    // where the signed power loses Lipschitz continuity.
    bool split_at_power_singularities = true;
};

enum class BlowupStatus {
    none_up_to_horizon,
    finite_detected,
    trivial,   // identically-zero trajectory from zero initial data
};

struct TrajectoryNode {
    double t;
    StateVec y;
    StateVec f;   // field at (t, y); used by the cubic Hermite dense output
};

struct TrajectoryEvent {
    int component;    // 0:u1 1:u2 2:w1 3:w2
    double t;
    int direction;    // +1 upward crossing, -1 downward
};

class Trajectory {
  public:
    std::vector<TrajectoryNode> nodes;
    std::vector<TrajectoryEvent> events;
    bool truncated_at_threshold = false;
    bool trivial = false;
    double threshold_hit_time = 0.0;   // meaningful when truncated_at_threshold

    double start_time() const { return nodes.front().t; }
    double end_time() const { return nodes.back().t; }

    /// Dense evaluation by piecewise cubic Hermite interpolation (C^1).
    StateVec eval(double t) const;
    double component(int i, double t) const { return eval(t)[i]; }

    /// First recorded zero crossing of a component, if any.
    std::optional<double> first_event_time(int component) const;
    std::vector<double> event_times(int component) const;

    /// CSV export: t,u1,u2,w1,w2 sampled uniformly (17 significant digits).
    void write_samples_csv(std::ostream& os, int sample_count) const;
    /// CSV export of events: component,time,direction.
    void write_events_csv(std::ostream& os) const;
};

/// Adaptive RK5(4) integration of the system from `init` at t=0 up to `horizon`,
/// truncated early if the blow-up threshold is reached. All component sign changes
/// are refined and recorded as events.
///
/// Throws std::runtime_error("stiffness failure...") on step-size collapse without
/// norm growth.
Trajectory integrate(const ProblemParams& params, const StateVec& init, double horizon,
                     const IntegrateOptions& opts = {});

struct BlowupReport {
    BlowupStatus status = BlowupStatus::none_up_to_horizon;
    std::optional<double> t_inf_estimate;
    std::optional<std::pair<double, double>> bracket;   // [last alive time, upper bound]
    bool monotone_cone_entered = false;
    // (threshold, hitting time) pairs from the geometric continuation
    std::vector<std::pair<double, double>> threshold_times;
};

/// Integrate until the component sum reaches `threshold` or t = horizon. On a
/// threshold hit, re-runs at 10x and 100x the threshold and extrapolates the
/// blow-up time from the power-law ansatz t_k = t_inf - c M_k^{-gamma}.
BlowupReport detect_blowup(const ProblemParams& params, const StateVec& init, double threshold,
                           double horizon, const IntegrateOptions& opts = {});

/// Pointwise ordering margins between two trajectories started from
/// (0, alpha_j, 0, beta_j) with alpha2 <= alpha1 and beta1 <= beta2:
///   u^2_k <= u^1_k, w^1_k <= w^2_k, and the linear separation rates
///   u1^1 - u1^2 >= (alpha1-alpha2) t, w1^2 - w1^1 >= (beta2-beta1) t.
struct ComparisonReport {
    double u_order_margin = 0.0;    // min over grid and k of u^1_k - u^2_k
    double w_order_margin = 0.0;    // min over grid and k of w^2_k - w^1_k
    double u_rate_margin = 0.0;     // min of (u1^1-u1^2) - (alpha1-alpha2) t
    double w_rate_margin = 0.0;     // min of (w1^2-w1^1) - (beta2-beta1) t
    std::optional<double> violation_time;   // where the worst margin < -1e-9, if any
    double min_margin() const;
    bool ok() const { return !violation_time.has_value(); }
};

ComparisonReport compare_trajectories(const ProblemParams& params, double alpha1, double beta1,
                                      double alpha2, double beta2, double t1,
                                      int grid_points = 257, const IntegrateOptions& opts = {});

}  // namespace pqbiharm
