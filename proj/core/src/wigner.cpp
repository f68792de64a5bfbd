#include "spinepr/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "spinepr/errors.hpp"
#include "spinepr/ode.hpp"
#include "spinepr/parallel.hpp"
#include "spinepr/rng.hpp"

namespace spinepr {

namespace {

// indices into WignerBlockSums::sum, matching MomentSet::entries() order
enum MomentIndex {
  iA0, iAp, iAm, iN0, iNp, iNm, iFp, iFm, iPm, iA00, iApp, iAmm,
  iA0p, iA0m, iApAm, iQ0, iGp, iGm, iNpNm, iSp, iSm, iM, iT,
  kNumMoments
};

constexpr const char* kMomentNames[kNumMoments] = {
    "a0", "ap", "am", "n0", "np", "nm", "fp", "fm", "pm", "a00", "app", "amm",
    "a0p", "a0m", "apam", "q0", "gp", "gm", "npnm", "sp", "sm", "M", "T"};

// Per-trajectory estimators of the *normal-ordered* moments.  Monomials in
// the sampled amplitudes estimate symmetric (Weyl) ordering; the finite
// correction for each operator string is folded in here so that block sums
// average directly to MomentSet entries:
//   <a^+a>      = <|a|^2>_W - 1/2
//   <a^+2 a^2>  = <|a|^4>_W - 2<|a|^2>_W + 1/2
//   <n_i n_j>   = <(|a_i|^2 - 1/2)(|a_j|^2 - 1/2)>_W      (i != j)
//   <a_i^+ a_j>, <a_i a_j>, <a_i^+2 a_j^2>, <a_i^+ a_j^+ a_k^2>
//               = the same monomial, no correction (cross-mode strings and
//                 holomorphic strings pick up no commutator terms)
void accumulate(WignerBlockSums& s, const cplx& a0, const cplx& ap, const cplx& am) {
  const double w0 = std::norm(a0) - 0.5;
  const double wp = std::norm(ap) - 0.5;
  const double wm = std::norm(am) - 0.5;
  const cplx cp = std::conj(ap), cm = std::conj(am);
  const cplx a00 = a0 * a0;

  s.sum[iA0] += a0;
  s.sum[iAp] += ap;
  s.sum[iAm] += am;
  s.sum[iN0] += w0;
  s.sum[iNp] += wp;
  s.sum[iNm] += wm;
  s.sum[iFp] += cp * a0;
  s.sum[iFm] += cm * a0;
  s.sum[iPm] += cp * am;
  s.sum[iA00] += a00;
  s.sum[iApp] += ap * ap;
  s.sum[iAmm] += am * am;
  s.sum[iA0p] += a0 * ap;
  s.sum[iA0m] += a0 * am;
  s.sum[iApAm] += ap * am;
  s.sum[iQ0] += std::norm(a0) * std::norm(a0) - 2.0 * std::norm(a0) + 0.5;
  s.sum[iGp] += wp * w0;
  s.sum[iGm] += wm * w0;
  s.sum[iNpNm] += wp * wm;
  s.sum[iSp] += cp * cp * a00;
  s.sum[iSm] += cm * cm * a00;
  s.sum[iM] += cp * cm * a00;
  s.sum[iT] += cp * am * w0;
  ++s.count;
}

struct Reduced {
  std::array<cplx, kNumMoments> mean{};
  std::array<double, kNumMoments> se{};
  std::uint64_t count = 0;
};

// merge blocks in index order (bit-stable), then delete-one-block jackknife
Reduced reduce_blocks(const std::vector<WignerBlockSums>& blocks) {
  Reduced r;
  std::array<cplx, kNumMoments> total{};
  for (const auto& b : blocks) {
    for (int e = 0; e < kNumMoments; ++e) total[e] += b.sum[e];
    r.count += b.count;
  }
  require(r.count > 0, errc::invalid_parameter, "empty ensemble reduction");
  for (int e = 0; e < kNumMoments; ++e) r.mean[e] = total[e] / double(r.count);

  const std::size_t nb = blocks.size();
  if (nb < 2) return r;  // no resamples, errors stay zero
  for (int e = 0; e < kNumMoments; ++e) {
    cplx loo_mean = 0;
    std::vector<cplx> loo(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      loo[b] = (total[e] - blocks[b].sum[e]) / double(r.count - blocks[b].count);
      loo_mean += loo[b];
    }
    loo_mean /= double(nb);
    double var = 0;
    for (std::size_t b = 0; b < nb; ++b) var += std::norm(loo[b] - loo_mean);
    r.se[e] = std::sqrt(var * double(nb - 1) / double(nb));
  }
  return r;
}

MomentSet scatter(const Reduced& r) {
  MomentSet m;
  m.a0 = r.mean[iA0];
  m.ap = r.mean[iAp];
  m.am = r.mean[iAm];
  m.n0 = r.mean[iN0].real();
  m.np = r.mean[iNp].real();
  m.nm = r.mean[iNm].real();
  m.fp = r.mean[iFp];
  m.fm = r.mean[iFm];
  m.pm = r.mean[iPm];
  m.a00 = r.mean[iA00];
  m.app = r.mean[iApp];
  m.amm = r.mean[iAmm];
  m.a0p = r.mean[iA0p];
  m.a0m = r.mean[iA0m];
  m.apam = r.mean[iApAm];
  m.q0 = r.mean[iQ0].real();
  m.gp = r.mean[iGp].real();
  m.gm = r.mean[iGm].real();
  m.npnm = r.mean[iNpNm].real();
  m.sp = r.mean[iSp];
  m.sm = r.mean[iSm];
  m.M = r.mean[iM];
  m.T = r.mean[iT];
  m.err.a0 = r.se[iA0];
  m.err.ap = r.se[iAp];
  m.err.am = r.se[iAm];
  m.err.n0 = r.se[iN0];
  m.err.np = r.se[iNp];
  m.err.nm = r.se[iNm];
  m.err.fp = r.se[iFp];
  m.err.fm = r.se[iFm];
  m.err.pm = r.se[iPm];
  m.err.a00 = r.se[iA00];
  m.err.app = r.se[iApp];
  m.err.amm = r.se[iAmm];
  m.err.a0p = r.se[iA0p];
  m.err.a0m = r.se[iA0m];
  m.err.apam = r.se[iApAm];
  m.err.q0 = r.se[iQ0];
  m.err.gp = r.se[iGp];
  m.err.gm = r.se[iGm];
  m.err.npnm = r.se[iNpNm];
  m.err.sp = r.se[iSp];
  m.err.sm = r.se[iSm];
  m.err.M = r.se[iM];
  m.err.T = r.se[iT];
  return m;
}

std::size_t grid_index(const WignerEnsemble& ens, double at_tau) {
  for (std::size_t g = 0; g < ens.tau_grid.size(); ++g)
    if (std::abs(ens.tau_grid[g] - at_tau) <= 1e-12 * std::max(1.0, std::abs(at_tau)))
      return g;
  fail(errc::invalid_parameter,
       "tau " + std::to_string(at_tau) + " was not recorded by integrate_ensemble");
}

}  // namespace

WignerEnsemble sample_initial(const ModelParams& params, std::uint64_t rng_seed,
                              std::uint64_t count) {
  params.validate_for_run();
  require(count >= 2, errc::invalid_parameter,
          "a Wigner ensemble needs at least 2 trajectories");

  WignerEnsemble ens;
  ens.params = params;
  ens.rng_seed = rng_seed;
  ens.count = count;
  ens.initial.resize(count);

  const double mu_pump = std::sqrt(params.n0_mean);
  double mu_seed = 0.0;
  double var_seed = 0.5;
  if (params.seed.kind == SeedKind::Coherent) mu_seed = std::sqrt(params.seed.alpha_seed_sq);
  if (params.seed.kind == SeedKind::Thermal) var_seed = params.seed.nbar_th + 0.5;

  // any partition works: trajectory i depends only on substream (seed, i)
  const std::size_t nb = std::size_t(std::min<std::uint64_t>(64, count));
  parallel_blocks(nb, default_thread_count(), [&](std::size_t b) {
    const std::uint64_t lo = count * b / nb, hi = count * (b + 1) / nb;
    for (std::uint64_t i = lo; i < hi; ++i) {
      auto rng = trajectory_stream(rng_seed, i);
      auto& a = ens.initial[i];
      a[0] = mu_pump + rng.next_complex_normal(0.5);
      a[1] = mu_seed + rng.next_complex_normal(var_seed);
      a[2] = mu_seed + rng.next_complex_normal(var_seed);
      a[3] = rng.next_complex_normal(0.5);  // beam-splitter port, vacuum
    }
  });
  return ens;
}

Eigen::Vector3cd drift(const Eigen::Vector3cd& alpha, const ModelParams& params) {
  const cplx a0 = alpha[0], ap = alpha[1], am = alpha[2];
  const double w0 = std::norm(a0) - 0.5;
  const double wp = std::norm(ap) - 0.5;
  const double wm = std::norm(am) - 0.5;
  const cplx mi(0.0, -1.0);
  Eigen::Vector3cd d;
  d[0] = mi * (2.0 * std::conj(a0) * ap * am + (wp + wm) * a0);
  d[1] = mi * (a0 * a0 * std::conj(am) + (w0 - params.q_over_g) * ap);
  d[2] = mi * (a0 * a0 * std::conj(ap) + (w0 - params.q_over_g) * am);
  return d;
}

WignerEnsemble integrate_ensemble(WignerEnsemble ens, const std::vector<double>& tau_grid,
                                  const WignerOptions& options) {
  require(options.tol > 0.0, errc::invalid_parameter, "integrator tolerance must be > 0");
  require(options.n_blocks >= 2, errc::invalid_parameter, "need at least 2 blocks");
  require(ens.count >= 2 && ens.initial.size() == ens.count, errc::invalid_parameter,
          "ensemble has no initial samples");
  if (tau_grid.empty()) return ens;
  for (std::size_t g = 0; g < tau_grid.size(); ++g) {
    require(tau_grid[g] >= 0.0, errc::invalid_parameter, "tau grid must be non-negative");
    if (g > 0)
      require(tau_grid[g] > tau_grid[g - 1], errc::invalid_parameter,
              "tau grid must be strictly increasing");
  }

  ens.options = options;
  ens.tau_grid = tau_grid;
  const std::size_t G = tau_grid.size();
  const std::size_t B = std::size_t(std::min<std::uint64_t>(options.n_blocks, ens.count));
  ens.sums.assign(G, std::vector<WignerBlockSums>(B));
  const std::uint64_t nstore = std::min<std::uint64_t>(options.store_records, ens.count);
  ens.stored.assign(std::size_t(nstore), Trajectory{});
  for (std::uint64_t i = 0; i < nstore; ++i) {
    ens.stored[std::size_t(i)].id = i;
    ens.stored[std::size_t(i)].record.resize(G);
  }

  OdeOptions ode;
  ode.rtol = options.tol;
  ode.atol = options.tol * 1e-2;

  const ModelParams params = ens.params;
  std::vector<double> block_drift(B, 0.0);

  parallel_blocks(B, options.n_threads ? options.n_threads : default_thread_count(),
                  [&](std::size_t b) {
    const std::uint64_t lo = ens.count * b / B, hi = ens.count * (b + 1) / B;
    auto rhs = [&params](double, const Eigen::Vector3cd& y) { return drift(y, params); };
    for (std::uint64_t i = lo; i < hi; ++i) {
      Eigen::Vector3cd y;
      y << ens.initial[i][0], ens.initial[i][1], ens.initial[i][2];
      const double weyl0 = std::norm(y[0]) + std::norm(y[1]) + std::norm(y[2]);
      auto sink = [&](std::size_t g, const Eigen::Vector3cd& z) {
        const double weyl = std::norm(z[0]) + std::norm(z[1]) + std::norm(z[2]);
        const double rel = std::abs(weyl - weyl0) / weyl0;
        if (rel > block_drift[b]) block_drift[b] = rel;
        if (rel > 10.0 * options.tol)
          fail(errc::numerical_failure,
               "Weyl total-number drift " + std::to_string(rel) + " on trajectory " +
                   std::to_string(i));
        accumulate(ens.sums[g][b], z[0], z[1], z[2]);
        if (i < nstore)
          ens.stored[std::size_t(i)].record[g] = {z[0], z[1], z[2], ens.initial[i][3]};
      };
      integrate_grid(rhs, y, 0.0, tau_grid.data(), G, sink, ode);
    }
  });

  ens.max_weyl_drift = *std::max_element(block_drift.begin(), block_drift.end());
  return ens;
}

MomentSet moments_wigner(const WignerEnsemble& ens, double at_tau) {
  const std::size_t g = grid_index(ens, at_tau);
  const Reduced r = reduce_blocks(ens.sums[g]);
  MomentSet m = scatter(r);
  // fourth-order estimators are the noisiest; flag the ones that are resolved
  // away from zero but carry a sloppy relative error
  for (int e : {iQ0, iGp, iGm, iNpNm, iSp, iSm, iM, iT}) {
    const double mag = std::abs(r.mean[e]);
    if (mag > 3.0 * r.se[e] && r.se[e] > ens.options.stat_warn_rel * mag)
      m.warnings.push_back(std::string("moment ") + kMomentNames[e] +
                           ": relative standard error above " +
                           std::to_string(ens.options.stat_warn_rel) +
                           " — increase the trajectory count");
  }
  return m;
}

MomentSet moments_wigner(const WignerEnsemble& ens, double at_tau,
                         std::size_t exclude_block) {
  const std::size_t g = grid_index(ens, at_tau);
  const auto& blocks = ens.sums[g];
  require(exclude_block < blocks.size(), errc::invalid_parameter,
          "block index out of range");
  require(blocks.size() >= 2, errc::invalid_parameter,
          "cannot resample a single block");
  std::vector<WignerBlockSums> rest;
  rest.reserve(blocks.size() - 1);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    if (k != exclude_block) rest.push_back(blocks[k]);
  return scatter(reduce_blocks(rest));
}

EntanglementReport wigner_report(const WignerEnsemble& ens, double at_tau,
                                 InferredVariant variant) {
  const std::size_t g = grid_index(ens, at_tau);
  const std::vector<WignerBlockSums>& blocks = ens.sums[g];
  const MomentSet full = moments_wigner(ens, at_tau);

  EntanglementReport r = evaluate_report(full, at_tau, variant);
  r.n_signal_err = full.err.np;

  const std::size_t nb = blocks.size();
  if (nb < 2) return r;

  constexpr double kHalfWidth = std::numbers::pi / 16.0;
  const double th_x = optimize_phase(full, PhaseObjective::TwoModeMinus, variant).theta0;
  const double th_i = optimize_phase(full, PhaseObjective::Insep, variant).theta0;
  std::vector<double> ups(nb), th(nb), corr(nb), xmin(nb), insep(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const MomentSet m = moments_wigner(ens, at_tau, b);
    const PhaseOptimum e = optimize_phase_near(m, PhaseObjective::EPR, variant, r.theta0,
                                               kHalfWidth);
    ups[b] = e.value;
    // keep each resample's angle on the same branch as the full-sample optimum
    double d = std::remainder(e.theta0 - r.theta0, std::numbers::pi);
    th[b] = r.theta0 + d;
    corr[b] = correlation(m, e.theta0);
    xmin[b] = optimize_phase_near(m, PhaseObjective::TwoModeMinus, variant, th_x, kHalfWidth)
                  .value;
    insep[b] = optimize_phase_near(m, PhaseObjective::Insep, variant, th_i, kHalfWidth).value;
  }
  auto jack_se = [nb](const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= double(nb);
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var * double(nb - 1) / double(nb));
  };
  r.upsilon_err = jack_se(ups);
  r.theta0_err = jack_se(th);
  r.correlation_c_err = jack_se(corr);
  r.var_xminus_min_err = jack_se(xmin);
  r.insep_ratio_err = jack_se(insep);
  return r;
}

void write_trajectories_csv(std::ostream& os, const WignerEnsemble& ens) {
  os << "traj_id,tau,re_a0,im_a0,re_ap,im_ap,re_am,im_am\n";
  char line[256];
  for (const Trajectory& t : ens.stored) {
    for (std::size_t g = 0; g < t.record.size(); ++g) {
      const auto& a = t.record[g];
      std::snprintf(line, sizeof line,
                    "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    static_cast<unsigned long long>(t.id), ens.tau_grid[g], a[0].real(),
                    a[0].imag(), a[1].real(), a[1].imag(), a[2].real(), a[2].imag());
      os << line;
    }
  }
}

}
