#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spinepr/measures.hpp"
#include "spinepr/model.hpp"

namespace spinepr {

// Truncated-Wigner Monte Carlo backend.  Initial states are sampled in phase
// space (one complex amplitude per mode, Gaussian widths set by the seed), and
// each sample evolves under the drift-only mean-field equations — the cubic
// Hamiltonian generates no diffusion term, so trajectories are deterministic
// given their initial draw.  Sample averages of c-number monomials estimate
// symmetrically-ordered moments; exact finite corrections convert each entry
// to the normal ordering MomentSet uses.

// Amplitudes (a_0, a_+1, a_-1, port) of one trajectory at each recorded time.
// The port mode is sampled for the readout model and never evolves.
struct Trajectory {
  std::uint64_t id = 0;
  std::vector<std::array<cplx, 4>> record;
};

struct WignerOptions {
  double tol = 1e-10;        // integrator local tolerance
  int n_blocks = 50;         // block accumulators (also jackknife resamples)
  unsigned n_threads = 0;    // 0 = hardware concurrency
  std::uint64_t store_records = 0;  // trajectories kept verbatim for dumps
  double stat_warn_rel = 0.1;       // relative-stderr bound before warning
};

// Running sums of the per-trajectory moment estimators for one block of
// trajectories, in MomentSet::entries() order.  Blocks are merged in index
// order, which makes every reduction bit-identical for any thread count.
struct WignerBlockSums {
  std::array<cplx, 23> sum{};
  std::uint64_t count = 0;
};

struct WignerEnsemble {
  ModelParams params{};
  std::uint64_t rng_seed = 0;
  std::uint64_t count = 0;
  WignerOptions options{};

  // initial phase-space draws, one per trajectory (a_0, a_+1, a_-1, port)
  std::vector<std::array<cplx, 4>> initial;

  // filled by integrate_ensemble: block sums per grid time; trajectories are
  // streamed through the integrator rather than stored (memory stays bounded
  // for large count x grid), except for the `stored` prefix kept for dumps
  std::vector<double> tau_grid;
  std::vector<std::vector<WignerBlockSums>> sums;  // [grid][block]
  std::vector<Trajectory> stored;
  double max_weyl_drift = 0.0;  // largest relative total-number drift seen
};

// Draw `count` independent initial samples: alpha = mu + eta with
// <|eta|^2> = 1/2 (vacuum/coherent) or nbar + 1/2 (thermal); pump mu = sqrt(N0)
// real, coherent seeds share the pump phase, port is vacuum.  Trajectory i is
// generated from substream (rng_seed, i), so the draw is independent of
// execution order.
WignerEnsemble sample_initial(const ModelParams& params, std::uint64_t rng_seed,
                              std::uint64_t count);

// Mean-field drift for (alpha_0, alpha_+1, alpha_-1); the port amplitude is
// constant and therefore not part of the integrated state.  Number symbols
// enter Weyl-ordered, W(n) = |alpha|^2 - 1/2.
Eigen::Vector3cd drift(const Eigen::Vector3cd& alpha, const ModelParams& params);

// Integrate every trajectory across tau_grid (adaptive RK, local tolerance
// options.tol), reducing moment sums at each grid time.  The Weyl-symbol
// total number must stay conserved to 10*tol (relative) along each
// trajectory; violations raise numerical_failure with the trajectory index.
// An empty grid returns the ensemble unchanged.
WignerEnsemble integrate_ensemble(WignerEnsemble ens, const std::vector<double>& tau_grid,
                                  const WignerOptions& options = {});

// Assemble the normal-ordered MomentSet at a recorded grid time: block sums
// are merged in order, ordering corrections are already folded into the
// per-trajectory estimators, and every entry gets a delete-one-block
// jackknife standard error.  Fourth-order entries that are resolved but
// noisy (stderr above options.stat_warn_rel of the value) attach a
// statistical-quality warning.
MomentSet moments_wigner(const WignerEnsemble& ens, double at_tau);

// Same reduction with one block left out — the jackknife resample used to
// propagate sampling error into quantities derived from several moments.
MomentSet moments_wigner(const WignerEnsemble& ens, double at_tau,
                         std::size_t exclude_block);

// Entanglement measures with Monte Carlo error bars: the full-sample report
// plus jackknife standard errors obtained by re-optimizing each objective on
// every delete-one-block moment set (bracketed around the full-sample
// optimum, with a global rescan fallback).
EntanglementReport wigner_report(const WignerEnsemble& ens, double at_tau,
                                 InferredVariant variant = InferredVariant::Optimal);

// Raw-trajectory debug dump of the stored prefix:
// traj_id, tau, re_a0, im_a0, re_ap, im_ap, re_am, im_am
void write_trajectories_csv(std::ostream& os, const WignerEnsemble& ens);

}
