#include "spinepr/exact.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "spinepr/parallel.hpp"

namespace spinepr {

namespace {

// log of the Poisson weight P(n | N0); lgamma keeps it O(1) per sector
double log_poisson(int n, double n0) {
  return -n0 + n * std::log(n0) - std::lgamma(double(n) + 1.0);
}

struct SectorEig {
  int n;
  Eigen::VectorXd w;   // eigenvalues
  Eigen::MatrixXd v;   // orthonormal eigenvectors (columns)
  Eigen::VectorXcd c0; // v^T c(initial), ready to phase-rotate
};

std::vector<SectorEig> decompose_all(const SectorState& state) {
  std::vector<const std::pair<const int, Eigen::VectorXcd>*> items;
  items.reserve(state.sectors.size());
  for (const auto& kv : state.sectors) items.push_back(&kv);

  std::vector<SectorEig> eig(items.size());
  parallel_blocks(items.size(), default_thread_count(), [&](std::size_t i) {
    const int n = items[i]->first;
    const Eigen::VectorXcd& c = items[i]->second;
    const SectorHamiltonian h = build_sector(n, state.params);
    SectorEig& e = eig[i];
    e.n = n;
    if (h.diag.size() == 1) {
      e.w = h.diag;
      e.v = Eigen::MatrixXd::Identity(1, 1);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
      solver.computeFromTridiagonal(h.diag, h.offdiag, Eigen::ComputeEigenvectors);
      if (solver.info() != Eigen::Success)
        fail(errc::numerical_failure,
             "tridiagonal eigensolver failed in sector n = " + std::to_string(n));
      e.w = solver.eigenvalues();
      e.v = solver.eigenvectors();
    }
    // split real/imag: two real matvecs instead of a mixed-scalar product
    e.c0.resize(e.w.size());
    e.c0.real() = e.v.transpose() * c.real();
    e.c0.imag() = e.v.transpose() * c.imag();
  });
  return eig;
}

void check_grid(const SectorState& state, const std::vector<double>& tau_grid) {
  require(!tau_grid.empty(), errc::invalid_parameter, "evolve: empty tau grid");
  require(tau_grid.front() >= state.time, errc::invalid_parameter,
          "evolve: grid starts before the state's time");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    require(tau_grid[i] > tau_grid[i - 1], errc::invalid_parameter,
            "evolve: tau grid must be strictly increasing");
}

// amplitudes of one sector at elapsed time dt
Eigen::VectorXcd propagate(const SectorEig& e, double dt) {
  Eigen::VectorXcd phased(e.w.size());
  for (Eigen::Index j = 0; j < e.w.size(); ++j)
    phased[j] = std::polar(1.0, -e.w[j] * dt) * e.c0[j];
  Eigen::VectorXcd out(e.w.size());
  out.real() = e.v * phased.real();
  out.imag() = e.v * phased.imag();
  return out;
}

}  // namespace

SectorHamiltonian build_sector(int n, const ModelParams& params) {
  require(n >= 0, errc::invalid_parameter, "build_sector: n must be >= 0");
  const int kmax = n / 2;
  SectorHamiltonian h;
  h.n = n;
  h.diag.resize(kmax + 1);
  h.offdiag.resize(kmax);
  for (int k = 0; k <= kmax; ++k) {
    const double pump = n - 2 * k;
    h.diag[k] = 2.0 * k * pump - params.q_over_g * 2.0 * k;
    if (k < kmax) h.offdiag[k] = (k + 1) * std::sqrt(pump * (pump - 1.0));
  }
  return h;
}

double SectorState::norm_sq() const {
  double s = 0.0;
  for (const auto& [n, c] : sectors) s += c.squaredNorm();
  return s;
}

SectorState init_coherent_pump(const ModelParams& params, double epsilon_cut, int n_window_max) {
  params.validate_for_run();
  require(params.seed.kind == SeedKind::Vacuum, errc::unsupported_configuration,
          "sector solver supports vacuum seeds only (thermal/coherent route to the "
          "phase-space backend)");

  int lo, hi;
  if (n_window_max >= 0) {
    require(n_window_max <= kMaxPumpSector, errc::resource_limit,
            "requested pump window exceeds the sector ceiling");
    lo = 0;
    hi = n_window_max;
  } else {
    require(epsilon_cut > 0.0 && epsilon_cut < 1.0, errc::invalid_parameter,
            "epsilon_cut must lie in (0, 1)");
    // grow a contiguous window around the Poisson mode, always absorbing the
    // heavier neighbour first, until the omitted weight drops below epsilon_cut
    const int mode = static_cast<int>(params.n0_mean);
    require(mode <= kMaxPumpSector, errc::resource_limit,
            "pump number demands a window beyond the sector ceiling");
    lo = hi = mode;
    double acc = std::exp(log_poisson(mode, params.n0_mean));
    while (acc < 1.0 - epsilon_cut) {
      const double pl = lo > 0 ? std::exp(log_poisson(lo - 1, params.n0_mean)) : -1.0;
      const double ph = std::exp(log_poisson(hi + 1, params.n0_mean));
      if (pl <= 0.0 && ph <= 0.0) break;  // remaining mass below double underflow
      if (pl >= ph) {
        --lo;
        acc += pl;
      } else {
        ++hi;
        acc += ph;
      }
      require(hi <= kMaxPumpSector, errc::resource_limit,
              "epsilon_cut demands a pump window beyond the sector ceiling");
    }
  }

  SectorState st;
  st.params = params;
  st.n_min = lo;
  st.n_max = hi;
  double norm2 = 0.0;
  for (int n = lo; n <= hi; ++n) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n / 2 + 1);
    c[0] = std::exp(0.5 * log_poisson(n, params.n0_mean));
    norm2 += std::norm(c[0]);
    st.sectors.emplace(n, std::move(c));
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& [n, c] : st.sectors) c *= inv;
  return st;
}

std::vector<SectorState> evolve_exact(const SectorState& state,
                                      const std::vector<double>& tau_grid) {
  check_grid(state, tau_grid);
  const auto eig = decompose_all(state);

  std::vector<SectorState> out(tau_grid.size());
  for (std::size_t ti = 0; ti < tau_grid.size(); ++ti) {
    SectorState& st = out[ti];
    st.params = state.params;
    st.n_min = state.n_min;
    st.n_max = state.n_max;
    st.time = tau_grid[ti];
    const double dt = tau_grid[ti] - state.time;
    for (const auto& e : eig) st.sectors.emplace(e.n, propagate(e, dt));
  }
  return out;
}

std::vector<MomentSet> evolve_moments(const SectorState& state,
                                      const std::vector<double>& tau_grid) {
  check_grid(state, tau_grid);
  const auto eig = decompose_all(state);

  std::vector<MomentSet> out(tau_grid.size());
  parallel_blocks(tau_grid.size(), default_thread_count(), [&](std::size_t ti) {
    SectorState st;
    st.params = state.params;
    st.n_min = state.n_min;
    st.n_max = state.n_max;
    st.time = tau_grid[ti];
    const double dt = tau_grid[ti] - state.time;
    for (const auto& e : eig) st.sectors.emplace(e.n, propagate(e, dt));
    out[ti] = moments_exact(st);
  });
  return out;
}

MomentSet moments_exact(const SectorState& state) {
  const double norm2 = state.norm_sq();
  require(std::abs(norm2 - 1.0) < 1e-8, errc::invalid_parameter,
          "moments_exact: state is not normalized");

  MomentSet m;
  for (const auto& [n, c] : state.sectors) {
    const int kmax = n / 2;
    // diagonal (same-basis-ket) accumulations
    for (int k = 0; k <= kmax; ++k) {
      const double p2 = std::norm(c[k]);
      const double pump = n - 2 * k;
      m.n0 += pump * p2;
      m.np += k * p2;
      m.npnm += double(k) * k * p2;
      m.gp += k * pump * p2;
      m.q0 += pump * (pump - 1.0) * p2;
    }
    // same sector, k -> k+1: <ap+ am+ a0^2>
    for (int k = 0; k < kmax; ++k) {
      const double pump = n - 2 * k;
      m.M += std::conj(c[k + 1]) * c[k] * ((k + 1) * std::sqrt(pump * (pump - 1.0)));
    }
    // cross sector n-1: <a0>
    if (auto it = state.sectors.find(n - 1); it != state.sectors.end()) {
      const Eigen::VectorXcd& cb = it->second;
      const int kk = static_cast<int>(std::min(cb.size(), c.size()));
      for (int k = 0; k < kk; ++k)
        m.a0 += std::conj(cb[k]) * c[k] * std::sqrt(double(n - 2 * k));
    }
    // cross sector n-2: <a0^2> and <ap am>
    if (auto it = state.sectors.find(n - 2); it != state.sectors.end()) {
      const Eigen::VectorXcd& cb = it->second;
      const int kk = static_cast<int>(std::min(cb.size(), c.size()));
      for (int k = 0; k < kk; ++k) {
        const double pump = n - 2 * k;
        m.a00 += std::conj(cb[k]) * c[k] * std::sqrt(pump * (pump - 1.0));
      }
      for (int k = 1; k <= kmax; ++k)
        if (k - 1 < cb.size()) m.apam += std::conj(cb[k - 1]) * c[k] * double(k);
    }
  }
  m.nm = m.np;
  m.gm = m.gp;
  // everything that changes n_{+1} - n_{-1} vanishes on the |n-2k,k,k> chain:
  // ap, am, fp, fm, pm, app, amm, a0p, a0m, sp, sm, T stay zero-initialized
  return m;
}

void write_sector_spectra_csv(std::ostream& os, const SectorState& state) {
  os << "n,k,eigenvalue_over_g\n";
  for (const auto& [n, c] : state.sectors) {
    (void)c;
    const SectorHamiltonian h = build_sector(n, state.params);
    Eigen::VectorXd w;
    if (h.diag.size() == 1) {
      w = h.diag;
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
      solver.computeFromTridiagonal(h.diag, h.offdiag, Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success)
        fail(errc::numerical_failure,
             "tridiagonal eigensolver failed in sector n = " + std::to_string(n));
      w = solver.eigenvalues();
    }
    char buf[64];
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%d,%ld,%.17g\n", n, long(k), w[k]);
      os << buf;
    }
  }
}

}
