#include "spinepr/analytic.hpp"

#include <cmath>

namespace spinepr {

// All expressions are transcribed exactly as derived for the undepleted model,
// including the 1/N0 correction terms — no algebraic simplification.  The
// optimum-time forms (epr_min_ud, tau_min_ud) carry a different truncation
// order in 1/N0 than epr_ud itself, so epr_ud(tau_min_ud) and epr_min_ud agree
// only up to O(1/sqrt(N0)); see the test suite.

double population_ud(const UndepletedParams& p, double tau) {
  p.validate();
  require(tau >= 0.0, errc::invalid_parameter, "population_ud: tau must be >= 0");
  const double sh = std::sinh(p.n0 * tau);
  return sh * sh * (1.0 + 2.0 * p.nbar) + p.nbar;
}

cplx anomalous_ud(const UndepletedParams& p, double tau) {
  p.validate();
  require(tau >= 0.0, errc::invalid_parameter, "anomalous_ud: tau must be >= 0");
  const double m = std::sinh(p.n0 * tau) * std::cosh(p.n0 * tau) * (1.0 + 2.0 * p.nbar);
  return cplx(0.0, -m);
}

double epr_ud(const UndepletedParams& p, double tau) {
  p.validate();
  require(tau >= 0.0, errc::invalid_parameter, "epr_ud: tau must be >= 0");
  const double A = 1.0 + 2.0 * p.nbar;
  const double ch = std::cosh(2.0 * p.n0 * tau);
  const double num = A * A + (1.0 / p.n0) * (A * ch - 1.0) * (2.0 * A * ch - 1.0);
  const double den = A * ch - (1.0 / p.n0) * (A * ch - 1.0) * (A * ch - 1.0);
  require(den > 0.0, errc::formula_breakdown, "epr_ud: denominator <= 0, outside validity regime");
  const double r = num / den;
  return r * r;
}

double tau_min_ud(const UndepletedParams& p) {
  p.validate();
  const double A = 1.0 + 2.0 * p.nbar;
  require(p.n0 > A * A, errc::formula_breakdown, "tau_min_ud: requires n0 > (1+2 nbar)^2");
  const double arg = -A / 2.0 + std::sqrt(A * A + 2.0 * p.n0) / 2.0;
  require(arg >= 1.0, errc::formula_breakdown, "tau_min_ud: arccosh argument < 1");
  return std::acosh(arg) / (2.0 * p.n0);
}

double epr_min_ud(const UndepletedParams& p) {
  p.validate();
  const double A = 1.0 + 2.0 * p.nbar;
  require(p.n0 > A * A, errc::formula_breakdown, "epr_min_ud: requires n0 > (1+2 nbar)^2");
  const double s2n = std::sqrt(2.0 * p.n0);
  const double den = std::sqrt(p.n0 / 2.0) - A -
                     (1.0 / (2.0 * p.n0)) * (A * A * A - (A * A + 1.0) * s2n);
  require(den != 0.0, errc::formula_breakdown, "epr_min_ud: zero denominator");
  const double v = s2n / den - 2.0;
  return v * v;
}

double two_mode_var_ud(const UndepletedParams& p, double tau) {
  p.validate();
  require(tau >= 0.0, errc::invalid_parameter, "two_mode_var_ud: tau must be >= 0");
  const double x = 2.0 * p.n0 * tau;
  return 2.0 * (1.0 + 2.0 * p.nbar) * (std::cosh(x) - std::sinh(x));
}

double insep_ud(const UndepletedParams& p, double tau) {
  p.validate();
  require(tau >= 0.0, errc::invalid_parameter, "insep_ud: tau must be >= 0");
  return 1.0 - std::tanh(2.0 * p.n0 * tau);
}

double nth_max_ud(double n0, double tol) {
  require(n0 > 0.0, errc::invalid_parameter, "nth_max_ud: n0 must be > 0");
  require(tol > 0.0, errc::invalid_parameter, "nth_max_ud: tol must be > 0");
  auto f = [&](double nbar) { return epr_min_ud({n0, nbar}) - 1.0; };
  require(f(0.0) < 0.0, errc::root_not_found, "nth_max_ud: no EPR even at nbar = 0");
  // the closed form is only defined for nbar < (sqrt(n0)-1)/2; bracket inside
  double lo = 0.0, hi = 1.0;
  const double nbar_limit = (std::sqrt(n0) - 1.0) / 2.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi >= nbar_limit)
      fail(errc::root_not_found, "nth_max_ud: no threshold below the formula's domain edge");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

MomentSet moments_ud(const UndepletedParams& p, double tau) {
  p.validate();
  require(tau >= 0.0, errc::invalid_parameter, "moments_ud: tau must be >= 0");
  const double n = population_ud(p, tau);
  const cplx sigma = anomalous_ud(p, tau);  // <a_p a_m>
  MomentSet m;
  // pump frozen as the c-number sqrt(N0) (real, the global phase reference)
  const double beta2 = p.n0;
  m.a0 = std::sqrt(p.n0);
  m.a00 = beta2;
  m.n0 = beta2;
  m.q0 = beta2 * beta2;
  m.np = m.nm = n;
  m.gp = m.gm = n * beta2;
  // Gaussian state: <np nm> = n^2 + |sigma|^2 (Wick, pair contraction)
  m.npnm = n * n + std::norm(sigma);
  m.M = std::conj(sigma) * beta2;
  m.apam = sigma;
  // all magnetization-changing entries vanish (unpolarized Gaussian state)
  return m;
}

}
