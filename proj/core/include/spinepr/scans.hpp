#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spinepr/measures.hpp"
#include "spinepr/model.hpp"

namespace spinepr {

// Parameter sweeps, thermal-threshold searches, power-law fits, and the
// figure-reproduction datasets built from them.

enum class Backend { Exact, Wigner, Analytic };
enum class SweepAxis { Tau, NbarTh, N0, Theta };

const char* backend_name(Backend b);
const char* sweep_axis_name(SweepAxis a);

struct SweepOptions {
  std::uint64_t trajectories = 20000;  // Wigner backend only
  std::uint64_t rng_seed = 1;
  double ode_tol = 1e-10;
  double tau_max = 0.012;       // time-optimization window: first pump cycle
  std::size_t tau_points = 600;
  InferredVariant variant = InferredVariant::Optimal;
  unsigned n_threads = 0;
};

struct SweepPoint {
  double x = 0;  // meaning set by the axis: tau, nbar_th / |alpha|^2, or N0
  EntanglementReport report;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Tau;
  Backend backend = Backend::Exact;
  ModelParams params{};        // base parameters the sweep started from
  std::uint64_t rng_seed = 0;
  std::uint64_t trajectories = 0;  // 0 for the deterministic backends
  double measurement_tau = kMeasurementTau;  // reference time, marked in outputs
  std::vector<SweepPoint> points;  // x strictly increasing
};

// Uniform grid of `points` times on [0, tau_max], with the reference
// measurement time inserted when it falls inside the range so reports at
// that time are exact grid lookups rather than interpolations.
std::vector<double> default_tau_grid(double tau_max = 0.012, std::size_t points = 600);

// Full report per grid time.  Backends: Exact needs a vacuum seed and
// Analytic a vacuum/thermal one (coherent evolution has no closed form);
// mismatches raise unsupported_configuration.  An empty grid returns an
// empty result.
SweepResult sweep_tau(const ModelParams& params, const std::vector<double>& tau_grid,
                      Backend backend, const SweepOptions& options = {});

// One time-optimized report per seed occupation: for each value a full tau
// sweep is run and every measure is minimized over its own time, so
// `report.tau` / `upsilon` belong to the EPR optimum while
// `var_xminus_min` and `insep_ratio` carry their respective minima.
// `seed_list` is nbar_th for thermal seeds or |alpha_{+-1}(0)|^2 for
// coherent ones; the value 0 means a vacuum seed in both cases.  All points
// share rng_seed (common random numbers).
SweepResult sweep_seed(double n0, const std::vector<double>& seed_list,
                       Backend backend = Backend::Wigner,
                       SeedKind kind = SeedKind::Thermal,
                       const SweepOptions& options = {});

// Largest tolerable thermal seed: bisection on nbar_th for time-optimized
// Upsilon_min = 1, to absolute tolerance tol.  Monte Carlo noise is tamed by
// common random numbers: every iterate reuses the same trajectory substreams,
// which makes Upsilon_min(nbar) a smooth monotone function of nbar for a
// fixed seed and preserves bisection's bracketing invariant.  Requires EPR
// entanglement at zero seed (Upsilon_min(0) < 1), else root_not_found.
double nth_threshold(double n0, double tol, Backend backend = Backend::Wigner,
                     const SweepOptions& options = {});

struct PowerLawFit {
  double prefactor = 0;  // a in y = a * x^b
  double exponent = 0;   // b
  double residual = 0;   // RMS residual in log-log coordinates
  double n0_min = 0, n0_max = 0;
};

// Least-squares line through (log x, log y).  Needs >= 4 strictly positive
// points.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Published-figure datasets: each id emits one CSV per (N0, seed-kind)
// combination — one column per plotted curve, standard-error columns for the
// stochastic ones, closed-form reference curves where the figure shows them —
// plus one JSON manifest describing the run.  Returns the written paths,
// manifest last.
enum class FigureId { F1a, F1b, F2a, F2b, F2c, F2d, F3a, F3b, F3c, F4a, F4b };

const char* figure_id_name(FigureId id);
FigureId parse_figure_id(const std::string& name);

struct FigureOptions {
  std::string out_dir = ".";
  std::vector<double> n0_list;    // empty -> figure default
  std::vector<double> nbar_list;  // empty -> figure default
  std::uint64_t trajectories = 20000;
  std::uint64_t rng_seed = 1;
  double tau_max = 0.012;
  std::size_t tau_points = 600;
  std::size_t theta_points = 181;  // phase-scan figures
  unsigned n_threads = 0;
};

std::vector<std::string> figure_dataset(FigureId id, const FigureOptions& options = {});

}
