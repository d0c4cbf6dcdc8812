#pragma once

#include <memory>
#include <optional>

#include "pqbiharm/dynamics.hpp"

namespace pqbiharm {

/// First zeros of u1 and w1 for the shot (0, alpha, 0, beta). A missing zero means
/// the component stayed one-signed up to blow-up / the monotone cone.
struct Mismatch {
    std::optional<double> t_u;
    std::optional<double> t_w;

    bool both() const { return t_u.has_value() && t_w.has_value(); }
    /// g = t_u - t_w; throws std::runtime_error("no zero found...") when one is missing.
    double value() const;
};

/// Shoot from (0, alpha, 0, beta) at the lambda in `params` (t0 is ignored) and
/// locate the first zeros of u1 and w1, extending the horizon as needed.
Mismatch mismatch(const ProblemParams& params, double alpha, double beta,
                  const IntegrateOptions& opts = {});

/// The positive first-eigenfunction shot: alpha, beta > 0 with u1, w1 > 0 on (0, t1)
/// and a simultaneous first zero at t1.
struct ShootingResult {
    ProblemParams params;   // t0 field set to t1
    double alpha;
    double beta;
    double t1;
    double residual;        // |u1(t1)| + |w1(t1)| after refinement
    std::shared_ptr<const Trajectory> trajectory;
};

/// Tighter-than-default integration tolerances used by the solvers; the rescaling
/// gauge can amplify absolute trajectory errors by large factors.
IntegrateOptions shooting_defaults();

/// Find the simultaneous first zero by fixing the gauge alpha = 1 and bisecting the
/// mismatch in beta over a geometric bracket scan. The returned arch trajectory ends
/// exactly at t1 with the symmetric terminal state (0, -alpha, 0, -beta) snapped in;
/// `residual` reports the pre-snap defect.
ShootingResult solve_first(double p, double q, double lambda,
                           const IntegrateOptions& opts = shooting_defaults());

/// The two-parameter rescaling u~(t) = a u(b t): eigenvalue lambda~ = lambda a^{p-q} b^{2p},
/// interval [0, t1/b], initial data (ab alpha, a^{p-1} b^{2p-1} beta).
struct RescaledSolution {
    ProblemParams params;   // (p, q, lambda~, t1/b)
    double alpha;
    double beta;
    double a;
    double b;
    std::shared_ptr<const Trajectory> base;

    double value(double t) const;         // a u1(b t)
    StateVec state(double t) const;       // full transformed state vector
};

RescaledSolution rescale(const ShootingResult& result, double a, double b);

/// Eigenfunction of the Navier problem on [0, t0] with index n (n-1 interior zeros),
/// represented as amp * A_*(rate * t) where A_* is the odd periodic extension of the
/// positive first arch stored as a dense trajectory. Valid for all real t; on [0, t0]
/// it is the eigenfunction itself.
class Eigenfunction {
  public:
    Eigenfunction(ProblemParams params, int n, std::shared_ptr<const Trajectory> arch,
                  double arch_len, double amp, double rate, double arch_alpha,
                  double arch_beta);

    double value(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    const ProblemParams& params() const { return params_; }
    int index() const { return n_; }
    double t0() const { return params_.t0; }
    double lambda() const { return params_.lambda; }
    double slope_at_origin() const;                 // u'(0)
    double curvature_rate_at_origin() const;        // w2(0) of the transformed state
    double amplitude() const { return amp_; }
    /// Interior zeros j t0/n, j = 1..n-1.
    std::vector<double> interior_zeros() const;
    /// A copy scaled by c != 0 (same zeros; eigenvalue rescales as lambda |c|^{p-q}).
    Eigenfunction scaled(double c) const;

    double arch_length() const { return arch_len_; }
    double rate() const { return rate_; }
    double arch_alpha() const { return arch_alpha_; }
    double arch_beta() const { return arch_beta_; }
    const Trajectory& arch() const { return *arch_; }
    std::shared_ptr<const Trajectory> arch_ptr() const { return arch_; }

    /// CSV export: t,u,du,d2u on a uniform grid over [0, t0].
    void write_csv(std::ostream& os, int sample_count) const;

  private:
    ProblemParams params_;
    int n_;
    std::shared_ptr<const Trajectory> arch_;
    double arch_len_;
    double amp_;
    double rate_;
    double arch_alpha_;
    double arch_beta_;
};

/// Solve the eigenvalue problem on [0, t0] for the positive (n=1) eigenfunction.
/// For p != q the solve targets `lambda_target` (default 1). For p = q the eigenvalue
/// is determined by t0 and `lambda_target` is ignored.
Eigenfunction solve_eigenproblem(double p, double q, double t0,
                                 std::optional<double> lambda_target = std::nullopt,
                                 const IntegrateOptions& opts = shooting_defaults());

/// View of the odd 2 t0-periodic extension u_* of an n=1 eigenfunction.
class PeriodicExtension {
  public:
    explicit PeriodicExtension(Eigenfunction eig);
    double value(double t) const { return eig_.value(t); }
    double derivative(double t) const { return eig_.derivative(t); }
    double second_derivative(double t) const { return eig_.second_derivative(t); }
    double period() const { return 2.0 * eig_.t0(); }

  private:
    Eigenfunction eig_;
};

PeriodicExtension extend_periodic(const Eigenfunction& eig);

/// n-th eigenfunction of the chain on [0, t0] built from the first couple on [0,1]:
///   SN_n(t) = (t0^{2-1/p} / n^2) f_{1*}(n t / t0),  sn_n = n^{2q} t0^{q/p-1-2q} lambda_1.
/// `eig1` is expected to be the spectral-normalized first couple on [0,1].
Eigenfunction nth_eigenfunction(const Eigenfunction& eig1, int n, double t0);

}  // namespace pqbiharm
