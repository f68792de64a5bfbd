#include "spinepr/measures.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spinepr/errors.hpp"

namespace spinepr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// <b_j^+ b_j> = <a_0^+ a_0>/2: the port is in vacuum, so the cross terms
// a_0^+ a_v etc. average to zero and each oscillator carries half the pump.
double lo_occupation(const MomentSet& m) {
  require(m.n0 > 0.0, errc::degenerate_denominator,
          "quadrature normalization: local oscillator (pump mode) is empty");
  return 0.5 * m.n0;
}

int check_mode(int j) {
  require(j == 1 || j == -1, errc::invalid_parameter, "mode index must be +1 or -1");
  return j;
}

cplx rot(double phase) { return std::polar(1.0, phase); }

}  // namespace

const char* inferred_variant_name(InferredVariant v) {
  return v == InferredVariant::Optimal ? "optimal" : "symdiff";
}

const char* phase_objective_name(PhaseObjective o) {
  switch (o) {
    case PhaseObjective::EPR: return "epr";
    case PhaseObjective::TwoModeMinus: return "xminus";
    case PhaseObjective::Insep: return "insep";
  }
  return "?";
}

double reduce_theta(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

double reduce_half_period(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

void QuadratureConfig::normalize() { theta = reduce_theta(theta); }

// <X_j> = 2 Re[e^{i theta} <a_j^+ b_j>]/sqrt(n_b) and <a_j^+ b_j> =
// <a_j^+ a_0>/sqrt(2): the port annihilator kills the vacuum.
double quadrature_mean(const MomentSet& m, double theta, int j) {
  const double nb = lo_occupation(m);
  const cplx f = check_mode(j) > 0 ? m.fp : m.fm;
  return std::sqrt(2.0) * (rot(theta) * f).real() / std::sqrt(nb);
}

// n_b <X_j^2> term by term (normal ordering in the port mode a_v; every
// surviving term is port-free because <a_v> = <a_v^2> = <a_v^+ a_v> = 0):
//   e^{2i theta} <a_j^+2 b_j^2>          -> s_j/2, plus conjugate
//   <a_j^+ b_j b_j^+ a_j> = <n_j (b^+b + 1)>  -> g_j/2 + n_j
//   <b_j^+ a_j a_j^+ b_j> = <(n_j + 1) b^+b>  -> g_j/2 + n_b
// using b_j^2 = (a_0^2 +- 2 a_0 a_v + a_v^2)/2 -> a_0^2/2 and
// b_j^+ b_j -> a_0^+ a_0 / 2 under the port-vacuum average.
double quadrature_second(const MomentSet& m, double theta, int j) {
  const double nb = lo_occupation(m);
  const bool plus = check_mode(j) > 0;
  const cplx s = plus ? m.sp : m.sm;
  const double g = plus ? m.gp : m.gm;
  const double n = plus ? m.np : m.nm;
  return ((rot(2.0 * theta) * s).real() + g + n + nb) / nb;
}

double generalized_quadrature_variance(const MomentSet& m, double theta, int j) {
  const double mean = quadrature_mean(m, theta, j);
  return quadrature_second(m, theta, j) - mean * mean;
}

// n_b <X_1(t1) X_-1(t2)>:
//   e^{i(t1+t2)} <a_1^+ a_-1^+ b_1 b_-1>,  b_1 b_-1 = (a_0^2 - a_v^2)/2 -> M/2
//   e^{i(t1-t2)} <a_1^+ a_-1 b_1 b_-1^+>,  b_1 b_-1^+ = (a_0 a_0^+ - a_v a_v^+ + ...)/2
// where the +1 commutators of pump and port cancel, leaving a_0^+ a_0 / 2 -> T/2;
// each line plus its conjugate.
double quadrature_cross_second(const MomentSet& m, double theta1, double theta2) {
  const double nb = lo_occupation(m);
  return ((rot(theta1 + theta2) * m.M).real() + (rot(theta1 - theta2) * m.T).real()) / nb;
}

double quadrature_covariance(const MomentSet& m, double theta) {
  return quadrature_cross_second(m, theta, theta) -
         quadrature_mean(m, theta, +1) * quadrature_mean(m, theta, -1);
}

double two_mode_variance(const MomentSet& m, double theta, int sign) {
  require(sign == 1 || sign == -1, errc::invalid_parameter,
          "two_mode_variance: sign must be +1 or -1");
  return generalized_quadrature_variance(m, theta, +1) +
         generalized_quadrature_variance(m, theta, -1) +
         2.0 * sign * quadrature_covariance(m, theta);
}

double inferred_variance(const MomentSet& m, double theta, int j, InferredVariant variant) {
  check_mode(j);
  if (variant == InferredVariant::SymmetricDifference) return two_mode_variance(m, theta, -1);
  const double var_inferring = generalized_quadrature_variance(m, theta, -j);
  require(var_inferring > 0.0, errc::degenerate_denominator,
          "inferred_variance: conditioning variance vanishes");
  const double cov = quadrature_covariance(m, theta);
  return generalized_quadrature_variance(m, theta, j) - cov * cov / var_inferring;
}

double epr_parameter(const MomentSet& m, double theta, InferredVariant variant) {
  const double nb = lo_occupation(m);
  const double den = 1.0 - m.np / nb;
  require(den * den >= 1e-12, errc::criterion_undefined,
          "EPR criterion undefined: signal occupation has reached the local-oscillator level");
  double vx, vy;
  if (variant == InferredVariant::Optimal) {
    vx = inferred_variance(m, theta, +1, variant);
    vy = inferred_variance(m, theta + 0.5 * kPi, +1, variant);
  } else {
    // the plain combinations: difference at theta, sum at the conjugate angle
    vx = two_mode_variance(m, theta, -1);
    vy = two_mode_variance(m, theta + 0.5 * kPi, +1);
  }
  return vx * vy / (den * den);
}

double correlation(const MomentSet& m, double theta) {
  const double s1 = quadrature_second(m, theta, +1);
  const double s2 = quadrature_second(m, theta, -1);
  require(s1 > 0.0 && s2 > 0.0, errc::degenerate_denominator,
          "correlation: a single-mode second moment vanishes");
  return quadrature_cross_second(m, theta, theta) / std::sqrt(s1 * s2);
}

// Denominator in the standard convention X_j = a_j e^{-i theta} + h.c.:
// Delta^2 X_j + Delta^2 Y_j = 4 n_j + 2 - 4 |<a_j>|^2, independent of theta
// (the <a_j^2> interference terms cancel between the conjugate pair).
double inseparability_ratio(const MomentSet& m, double theta) {
  const double single_sum = 2.0 * (4.0 * m.np + 2.0 - 4.0 * std::norm(m.ap));
  require(single_sum > 0.0, errc::degenerate_denominator,
          "inseparability_ratio: single-mode variance sum vanishes");
  const double pair_sum =
      two_mode_variance(m, theta, -1) + two_mode_variance(m, theta + 0.5 * kPi, +1);
  return pair_sum / single_sum;
}

namespace {

double phase_objective(const MomentSet& m, PhaseObjective objective, InferredVariant variant,
                       double theta) {
  switch (objective) {
    case PhaseObjective::EPR: return epr_parameter(m, theta, variant);
    case PhaseObjective::TwoModeMinus: return two_mode_variance(m, theta, -1);
    case PhaseObjective::Insep: return inseparability_ratio(m, theta);
  }
  fail(errc::invalid_parameter, "unknown phase objective");
}

template <class F>
PhaseOptimum golden_min(F&& obj, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = obj(c), fd = obj(d);
  while (b - a > 1e-7) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = obj(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = obj(d);
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, obj(mid)};
}

}  // namespace

PhaseOptimum optimize_phase(const MomentSet& m, PhaseObjective objective, InferredVariant variant,
                            int scan_points) {
  require(scan_points >= 8, errc::invalid_parameter, "optimize_phase: need at least 8 scan points");
  auto obj = [&](double th) { return phase_objective(m, objective, variant, th); };

  const double h = kPi / scan_points;
  double best = std::numeric_limits<double>::infinity();
  int k0 = 0;
  for (int k = 0; k < scan_points; ++k) {
    const double v = obj(k * h);
    if (v < best) {
      best = v;
      k0 = k;
    }
  }

  // golden-section refinement inside the bracketing cell pair
  PhaseOptimum r = golden_min(obj, k0 * h - h, k0 * h + h);
  if (r.value > best) {  // a flat objective can leave the midpoint a hair above the grid sample
    r = {double(k0) * h, best};
  }
  r.theta0 = reduce_half_period(r.theta0);
  return r;
}

PhaseOptimum optimize_phase_near(const MomentSet& m, PhaseObjective objective,
                                 InferredVariant variant, double theta_center,
                                 double half_width) {
  require(half_width > 0.0 && half_width < kPi / 2,
          errc::invalid_parameter, "optimize_phase_near: bad half width");
  auto obj = [&](double th) { return phase_objective(m, objective, variant, th); };
  const double fc = obj(theta_center);
  if (fc <= obj(theta_center - half_width) && fc <= obj(theta_center + half_width)) {
    PhaseOptimum r = golden_min(obj, theta_center - half_width, theta_center + half_width);
    if (r.value > fc) r = {theta_center, fc};
    return r;  // theta kept un-reduced: caller compares against theta_center
  }
  return optimize_phase(m, objective, variant);
}

EntanglementReport evaluate_report(const MomentSet& m, double tau, InferredVariant variant) {
  EntanglementReport r;
  r.tau = tau;
  r.n_signal = m.np;
  r.n_pump = m.n0;
  r.warnings = m.warnings;
  const PhaseOptimum epr = optimize_phase(m, PhaseObjective::EPR, variant);
  r.theta0 = epr.theta0;
  r.upsilon = epr.value;
  r.correlation_c = correlation(m, epr.theta0);
  r.var_xminus_min = optimize_phase(m, PhaseObjective::TwoModeMinus, variant).value;
  r.insep_ratio = optimize_phase(m, PhaseObjective::Insep, variant).value;
  return r;
}

namespace {

double report_objective(const EntanglementReport& r, PhaseObjective objective) {
  switch (objective) {
    case PhaseObjective::EPR: return r.upsilon;
    case PhaseObjective::TwoModeMinus: return r.var_xminus_min;
    case PhaseObjective::Insep: return r.insep_ratio;
  }
  fail(errc::invalid_parameter, "unknown phase objective");
}

void set_report_objective(EntanglementReport& r, PhaseObjective objective, double v) {
  switch (objective) {
    case PhaseObjective::EPR: r.upsilon = v; return;
    case PhaseObjective::TwoModeMinus: r.var_xminus_min = v; return;
    case PhaseObjective::Insep: r.insep_ratio = v; return;
  }
}

}  // namespace

EntanglementReport optimize_time(const std::vector<EntanglementReport>& reports,
                                 PhaseObjective objective) {
  require(!reports.empty(), errc::invalid_parameter, "optimize_time: no reports given");
  for (size_t i = 1; i < reports.size(); ++i)
    require(reports[i].tau > reports[i - 1].tau, errc::invalid_parameter,
            "optimize_time: tau grid must be strictly increasing");

  size_t best = 0;
  double vbest = report_objective(reports[0], objective);
  for (size_t i = 1; i < reports.size(); ++i) {
    const double v = report_objective(reports[i], objective);
    if (v < vbest) {
      vbest = v;
      best = i;
    }
  }
  EntanglementReport out = reports[best];
  if (best == 0 || best + 1 == reports.size()) return out;  // endpoint: nothing to refine against

  const double x1 = reports[best - 1].tau, x2 = reports[best].tau, x3 = reports[best + 1].tau;
  const double y1 = report_objective(reports[best - 1], objective), y2 = vbest,
               y3 = report_objective(reports[best + 1], objective);
  const double den = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
  if (std::abs(den) < 1e-300) return out;  // flat triple
  double xs = x2 - 0.5 * ((x2 - x1) * (x2 - x1) * (y2 - y3) - (x2 - x3) * (x2 - x3) * (y2 - y1)) / den;
  xs = std::min(std::max(xs, x1), x3);
  // quadratic (Lagrange) value at the vertex
  const double l1 = (xs - x2) * (xs - x3) / ((x1 - x2) * (x1 - x3));
  const double l2 = (xs - x1) * (xs - x3) / ((x2 - x1) * (x2 - x3));
  const double l3 = (xs - x1) * (xs - x2) / ((x3 - x1) * (x3 - x2));
  out.tau = xs;
  set_report_objective(out, objective, y1 * l1 + y2 * l2 + y3 * l3);
  return out;
}

}
