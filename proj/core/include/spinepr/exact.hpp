#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <vector>

#include "spinepr/model.hpp"

namespace spinepr {

// Exact evolution by conserved-quantity decomposition.  Total atom number N
// and magnetization are conserved, and pair production keeps n_{+1} = n_{-1},
// so a vacuum-seeded run never leaves the chain |n-2k, k, k>, k = 0..floor(n/2)
// inside each total-number sector n.  Each sector Hamiltonian is a small real
// symmetric tridiagonal matrix; propagation is exact via eigendecomposition.

struct SectorHamiltonian {
  int n = 0;                // total atom number of the sector
  Eigen::VectorXd diag;     // d_k = 2k(n-2k) - (q/g) 2k, k = 0..floor(n/2)
  Eigen::VectorXd offdiag;  // t_k = (k+1) sqrt((n-2k)(n-2k-1)), k -> k+1 coupling
};

SectorHamiltonian build_sector(int n, const ModelParams& params);

struct SectorState {
  std::map<int, Eigen::VectorXcd> sectors;  // n -> amplitudes c_{n,k}
  int n_min = 0, n_max = 0;                 // retained pump-number window
  double time = 0.0;                        // tau the amplitudes refer to
  ModelParams params{};                     // configuration the state was built for

  double norm_sq() const;
};

// Hard ceiling on the retained pump-number window; hitting it means the
// requested truncation would be absurdly large, not that physics needs it.
inline constexpr int kMaxPumpSector = 100000;

// Coherent pump |sqrt(N0)>, vacuum signal/idler: Poisson amplitudes at k = 0.
// The sector window is grown greedily around the Poisson mode until the
// omitted weight is below epsilon_cut, then the state is normalized.
// n_window_max >= 0 instead retains every sector in [0, n_window_max]
// (normalized), which pins the truncation when comparing against a dense
// calculation living in the same window.
SectorState init_coherent_pump(const ModelParams& params, double epsilon_cut = 1e-12,
                               int n_window_max = -1);

// Propagate through every tau in the grid (strictly increasing, first entry
// >= state.time).  One eigendecomposition per sector serves the whole grid.
std::vector<SectorState> evolve_exact(const SectorState& state,
                                      const std::vector<double>& tau_grid);

// Same propagation, but reduce each grid point straight to moments instead of
// keeping the amplitudes: the form the parameter sweeps want (a long tau grid
// of retained SectorStates would dwarf the moments in memory).
std::vector<MomentSet> evolve_moments(const SectorState& state,
                                      const std::vector<double>& tau_grid);

// Normally ordered moments by ladder-operator application on the amplitudes.
// Magnetization-changing entries are identically zero for this backend.
MomentSet moments_exact(const SectorState& state);

// Debug dump of the per-sector spectra: columns n, k, eigenvalue.
void write_sector_spectra_csv(std::ostream& os, const SectorState& state);

}
