#pragma once

#include <complex>

#include "spinepr/model.hpp"

namespace spinepr {

// Undepleted-pump (parametric) closed forms.  The pump is frozen at its
// initial amplitude, so everything reduces to two-mode squeezing of the
// signal/idler pair with squeezing rate N0.  Valid in the short-time limit
// (depletion below ~10%); we evaluate the formulas verbatim anywhere and let
// callers decide how far to trust them.
struct UndepletedParams {
  double n0 = 175.0;   // N0
  double nbar = 0.0;   // thermal seed population per mode

  void validate() const {
    require(n0 > 0.0, errc::invalid_parameter, "undepleted model: n0 must be > 0");
    require(nbar >= 0.0, errc::invalid_parameter, "undepleted model: nbar must be >= 0");
  }
};

// signal (= idler) population: sinh^2(N0 tau) (1 + 2 nbar) + nbar
double population_ud(const UndepletedParams& p, double tau);

// anomalous pair moment <a_+ a_->: -i sinh(N0 tau) cosh(N0 tau) (1 + 2 nbar)
cplx anomalous_ud(const UndepletedParams& p, double tau);

// EPR parameter including the printed 1/N0 corrections
double epr_ud(const UndepletedParams& p, double tau);

// closed forms for the optimum over time
double epr_min_ud(const UndepletedParams& p);
double tau_min_ud(const UndepletedParams& p);

// minimum two-mode quadrature variance: 2 (1 + 2 nbar) [cosh(2N0 tau) - sinh(2N0 tau)]
double two_mode_var_ud(const UndepletedParams& p, double tau);

// inseparability ratio: 1 - tanh(2 N0 tau), independent of nbar
double insep_ud(const UndepletedParams& p, double tau);

// largest thermal seed that keeps EPR (root of epr_min_ud = 1 in nbar)
double nth_max_ud(double n0, double tol);

// Assemble the undepleted-regime MomentSet so the measures layer can be driven
// by the closed forms (reference curves, short-time oracle).  The pump is a
// frozen coherent amplitude sqrt(N0); signal/idler are a two-mode squeezed
// thermal state, whose fourth moments follow from Gaussian (Wick) factoring.
MomentSet moments_ud(const UndepletedParams& p, double tau);

}
