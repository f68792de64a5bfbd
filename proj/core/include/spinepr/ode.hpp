#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "spinepr/errors.hpp"

namespace spinepr {

// Adaptive Dormand-Prince RK5(4) with FSAL.  State must support Eigen-style
// arithmetic (axpy expressions, cwiseAbs, maxCoeff); used with Vector3cd for
// Wigner trajectories and VectorXcd for the dense oracle.
//
// Output is produced exactly at the requested grid times by clamping the step,
// which keeps grid values independent of the internal step history in exchange
// for a few extra steps — the right trade for reproducible Monte Carlo sums.
struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double first_step = 0.0;   // 0 = automatic
  double max_step = 0.0;     // 0 = unlimited
  long max_steps = 2'000'000;
};

struct OdeStats {
  long steps = 0;
  long rejected = 0;
};

namespace detail {
// Butcher tableau (Dormand & Prince 1980), b = 5th order weights, e = b - b4th
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b[7] = {35.0 / 384,      0.0,          500.0 / 1113, 125.0 / 192,
                                   -2187.0 / 6784,  11.0 / 84,    0.0};
inline constexpr double dp_e[7] = {71.0 / 57600,    0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
}

// Integrate dy/dt = rhs(t, y) from t0 through every entry of an increasing
// grid, invoking sink(grid_index, y) at each grid time.  The grid's first
// entry may equal t0.
template <class State, class Rhs, class Sink>
OdeStats integrate_grid(Rhs&& rhs, State y, double t0, const double* grid, std::size_t n_grid,
                        Sink&& sink, const OdeOptions& opt = {}) {
  OdeStats stats;
  if (n_grid == 0) return stats;

  auto err_norm = [&](const State& err, const State& y0, const State& y1) {
    // max_i |e_i| / (atol + rtol*max(|y0_i|,|y1_i|)), Hairer-Norsett-Wanner style
    double m = 0.0;
    for (long i = 0; i < err.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      m = std::max(m, std::abs(err[i]) / sc);
    }
    return m;
  };

  double t = t0;
  std::size_t gi = 0;
  // emit grid points that coincide with the start time
  while (gi < n_grid && grid[gi] <= t + 1e-300) {
    require(grid[gi] >= t0, errc::invalid_parameter, "time grid precedes initial time");
    sink(gi, y);
    ++gi;
  }
  if (gi == n_grid) return stats;

  State k[7];
  k[0] = rhs(t, y);

  // initial step heuristic: fraction of the first output interval, bounded by
  // a rate estimate from the initial derivative
  double h = opt.first_step;
  if (h <= 0.0) {
    const double span = grid[n_grid - 1] - t;
    double ynorm = 0.0, fnorm = 0.0;
    for (long i = 0; i < y.size(); ++i) {
      ynorm = std::max(ynorm, std::abs(y[i]));
      fnorm = std::max(fnorm, std::abs(k[0][i]));
    }
    h = (fnorm > 0.0) ? 0.01 * (ynorm + opt.atol) / fnorm : 1e-6 * span;
    h = std::min(h, span);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(grid[n_grid - 1]);
  State y_new, err;

  while (gi < n_grid) {
    if (stats.steps >= opt.max_steps)
      fail(errc::numerical_failure, "ODE step budget exhausted");
    bool hit_grid = false;
    if (t + h >= grid[gi]) {  // clamp to the next output time
      h = grid[gi] - t;
      hit_grid = true;
    }
    if (h <= hmin && !hit_grid)
      fail(errc::numerical_failure, "ODE step size underflow");

    // stages (k[0] is FSAL from the previous accepted step)
    for (int s = 1; s < 7; ++s) {
      State ys = y;
      for (int j = 0; j < s; ++j)
        if (detail::dp_a[s][j] != 0.0) ys += (h * detail::dp_a[s][j]) * k[j];
      k[s] = rhs(t + detail::dp_c[s] * h, ys);
    }
    y_new = y;
    for (int s = 0; s < 7; ++s)
      if (detail::dp_b[s] != 0.0) y_new += (h * detail::dp_b[s]) * k[s];
    err = (h * detail::dp_e[0]) * k[0];
    for (int s = 2; s < 7; ++s) err += (h * detail::dp_e[s]) * k[s];

    const double en = err_norm(err, y, y_new);
    if (en <= 1.0) {
      t += h;
      y = y_new;
      k[0] = k[6];  // FSAL
      ++stats.steps;
      if (hit_grid) {
        t = grid[gi];  // kill accumulated roundoff at output times
        sink(gi, y);
        ++gi;
        while (gi < n_grid && grid[gi] == t) { sink(gi, y); ++gi; }
      }
      double fac = (en > 0.0) ? 0.9 * std::pow(en, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      if (h <= hmin) fail(errc::numerical_failure, "ODE step size underflow");
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  return stats;
}

}
