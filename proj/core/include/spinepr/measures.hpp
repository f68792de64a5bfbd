#pragma once

#include <string>
#include <vector>

#include "spinepr/model.hpp"

namespace spinepr {

// Entanglement measures built on homodyne-style quadratures.  The local
// oscillator is the pump mode itself, split 50:50 with a vacuum port:
//
//   b_{+1} = (a_0 + a_v)/sqrt(2),   b_{-1} = (a_0 - a_v)/sqrt(2),
//   X_j(theta) = (a_j^+ b_j e^{i theta} + b_j^+ a_j e^{-i theta}) / sqrt(<b^+ b>)
//
// with the port mode a_v in vacuum.  All port contributions are eliminated
// symbolically (see measures.cpp), so every function here is a closed-form
// expression in MomentSet entries.  Everything is a pure function; safe to
// call concurrently.

// Which inferred-variance combination enters the EPR product: the optimal
// linear estimator, or the plain difference/sum pair (not optimal, kept
// selectable so the gap between the two can be measured).
enum class InferredVariant { Optimal, SymmetricDifference };

// Objective minimized by optimize_phase.
enum class PhaseObjective { EPR, TwoModeMinus, Insep };

const char* inferred_variant_name(InferredVariant v);
const char* phase_objective_name(PhaseObjective o);

// Local-oscillator settings as exposed on the command line.
struct QuadratureConfig {
  double theta = 0.0;
  InferredVariant inferred_variant = InferredVariant::Optimal;

  void normalize();  // reduce theta into [0, 2*pi)
};

// One fully-evaluated entanglement snapshot.  The *_err fields are jackknife
// standard errors filled by Monte Carlo backends; deterministic backends
// leave them zero.
struct EntanglementReport {
  double tau = 0;
  double n_signal = 0;        // <n_{+1}>
  double n_pump = 0;          // <n_0>
  double theta0 = 0;          // LO phase minimizing the EPR parameter, in [0, pi)
  double upsilon = 0;         // EPR parameter at theta0
  double correlation_c = 0;   // quadrature correlation at theta0
  double var_xminus_min = 0;  // min over theta of Delta^2 X_-
  double insep_ratio = 0;     // sum(Delta^2_2)/sum(Delta^2_1) at its own optimal theta

  double n_signal_err = 0;
  double theta0_err = 0;
  double upsilon_err = 0;
  double correlation_c_err = 0;
  double var_xminus_min_err = 0;
  double insep_ratio_err = 0;

  // statistical-quality advisories inherited from the input moments
  std::vector<std::string> warnings{};
};

double reduce_theta(double theta);        // into [0, 2*pi)
double reduce_half_period(double theta);  // into [0, pi)

// <X_j(theta)> and <X_j(theta)^2>; j = +1 or -1.
double quadrature_mean(const MomentSet& m, double theta, int j);
double quadrature_second(const MomentSet& m, double theta, int j);

// Delta^2 X_j(theta).
double generalized_quadrature_variance(const MomentSet& m, double theta, int j);

// <X_{+1}(theta1) X_{-1}(theta2)> and the equal-angle covariance.
double quadrature_cross_second(const MomentSet& m, double theta1, double theta2);
double quadrature_covariance(const MomentSet& m, double theta);

// Delta^2 (X_{+1} +- X_{-1})(theta); sign = +1 or -1.
double two_mode_variance(const MomentSet& m, double theta, int sign);

// Inferred variance of X_j given a measurement of X_{-j} at the same angle.
// Optimal uses the best linear estimator, Var_j - Cov^2/Var_{-j}; the
// SymmetricDifference variant is the unweighted difference combination
// Delta^2(X_j - X_{-j}) (its conjugate partner uses the sum; epr_parameter
// assembles that pairing).
double inferred_variance(const MomentSet& m, double theta, int j,
                         InferredVariant variant = InferredVariant::Optimal);

// EPR criterion
//   Upsilon = Delta^2_inf X * Delta^2_inf Y / (1 - n_j/<b^+ b>)^2,
// with Y the conjugate quadrature at theta + pi/2.  Symmetric under mode
// relabeling; evaluated on the j = +1 side.
double epr_parameter(const MomentSet& m, double theta,
                     InferredVariant variant = InferredVariant::Optimal);

// C = <X_1 X_-1> / sqrt(<X_1^2><X_-1^2>) at equal angles.
double correlation(const MomentSet& m, double theta);

// sum(Delta^2_2)/sum(Delta^2_1): two-mode generalized variances against
// single-mode variances in the standard (unit-vacuum-free) convention
//   X_j = a_j e^{-i theta} + a_j^+ e^{i theta}.
double inseparability_ratio(const MomentSet& m, double theta);

struct PhaseOptimum {
  double theta0 = 0;
  double value = 0;
};

// Global minimum over theta in [0, pi) — all objectives are pi-periodic —
// by uniform scan plus golden-section refinement.  The returned value is
// never above any scan sample.
PhaseOptimum optimize_phase(const MomentSet& m, PhaseObjective objective,
                            InferredVariant variant = InferredVariant::Optimal,
                            int scan_points = 512);

// Refine within [center - half_width, center + half_width] only; falls back
// to the global scan when the bracket holds no interior minimum.  Used for
// Monte Carlo resampling, where the optimum of a perturbed moment set sits
// near the full-sample one.
PhaseOptimum optimize_phase_near(const MomentSet& m, PhaseObjective objective,
                                 InferredVariant variant, double theta_center,
                                 double half_width);

// Evaluate everything at once: EPR-optimal phase, correlation there, and the
// independently phase-optimized two-mode variance and inseparability ratio.
EntanglementReport evaluate_report(const MomentSet& m, double tau,
                                   InferredVariant variant = InferredVariant::Optimal);

// Pick the report minimizing the objective over an increasing tau grid, with
// parabolic refinement of (tau, value) between the neighboring grid points.
// Fields other than tau and the refined objective are taken from the best
// grid point.
EntanglementReport optimize_time(const std::vector<EntanglementReport>& reports,
                                 PhaseObjective objective);

}
