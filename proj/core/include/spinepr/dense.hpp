#pragma once

#include "spinepr/model.hpp"

namespace spinepr {

// Brute-force validation backend: the full three-mode Fock space with a
// uniform per-mode cutoff, no sector structure assumed.  Deliberately
// independent of the sector solver (different basis, different propagation),
// so agreement between the two is meaningful.  Only sensible at small pump
// numbers; the ceiling guards against accidental large runs.
inline constexpr long kMaxDenseDim = 2'000'000;

// Evolve the configured initial state to tau and return all moments.
// Vacuum and coherent seeds are pure states; thermal seeds are handled as a
// truncated Bose-Einstein mixture over signal/idler number states.
// Internally propagates with two unrelated integrators (Krylov exponential
// and an adaptive embedded Runge-Kutta) and fails loudly if they disagree.
MomentSet dense_oracle(const ModelParams& params, double tau, int n_cut);

// Variant starting from the number state |n_pump, 0, 0> instead of a coherent
// pump: single-sector dynamics with known closed-form limits (n_pump = 2 is an
// exact two-level Rabi problem), used for cross-validation.
MomentSet dense_oracle_fock_pump(int n_pump, const ModelParams& params, double tau, int n_cut);

// Literal check of the homodyne reduction: append a real vacuum port mode of
// cutoff nv_cut, build the beam-splitter outputs b_{+-} = (a0 +- av)/sqrt(2)
// and the quadratures X_j(theta) as explicit operators, and take expectation
// values in the four-mode state.  The measures layer must reproduce these
// numbers from the three-mode MomentSet alone.
struct LiteralQuadratures {
  double mean_p = 0, mean_m = 0;  // <X_{+1}>, <X_{-1}>
  double sec_p = 0, sec_m = 0;    // <X_{+1}^2>, <X_{-1}^2>
  double cross = 0;               // <X_{+1} X_{-1}>
};
LiteralQuadratures dense_literal_quadratures(const ModelParams& params, double tau, int n_cut,
                                             int nv_cut, double theta);

}
