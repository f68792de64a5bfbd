#include "spinepr/scans.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "spinepr/analytic.hpp"
#include "spinepr/errors.hpp"
#include "spinepr/exact.hpp"
#include "spinepr/io.hpp"
#include "spinepr/version.hpp"
#include "spinepr/wigner.hpp"

namespace spinepr {

namespace {

using nlohmann::json;

ModelParams seeded_params(double n0, SeedKind kind, double value) {
  ModelParams p;
  p.n0_mean = n0;
  p.q_over_g = n0;  // phase matched
  if (value > 0.0) {
    require(kind != SeedKind::Vacuum, errc::invalid_parameter,
            "a vacuum seed carries no occupation");
    p.seed.kind = kind;
    if (kind == SeedKind::Thermal)
      p.seed.nbar_th = value;
    else
      p.seed.alpha_seed_sq = value;
  }
  return p;
}

UndepletedParams ud_of(const ModelParams& p) {
  UndepletedParams u;
  u.n0 = p.n0_mean;
  switch (p.seed.kind) {
    case SeedKind::Vacuum:
      u.nbar = 0.0;
      break;
    case SeedKind::Thermal:
      u.nbar = p.seed.nbar_th;
      break;
    default:
      fail(errc::unsupported_configuration,
           "the undepleted-pump model covers vacuum and thermal seeds only");
  }
  return u;
}

void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] >= 0.0, errc::invalid_parameter, "tau grid must be non-negative");
    if (i > 0)
      require(grid[i] > grid[i - 1], errc::invalid_parameter,
              "tau grid must be strictly increasing");
  }
}

std::vector<EntanglementReport> reports_over_grid(const ModelParams& params,
                                                  const std::vector<double>& grid,
                                                  Backend backend, const SweepOptions& o) {
  std::vector<EntanglementReport> out;
  out.reserve(grid.size());
  switch (backend) {
    case Backend::Exact: {
      auto moments = evolve_moments(init_coherent_pump(params), grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        out.push_back(evaluate_report(moments[i], grid[i], o.variant));
      break;
    }
    case Backend::Analytic: {
      const UndepletedParams u = ud_of(params);
      for (double tau : grid)
        out.push_back(evaluate_report(moments_ud(u, tau), tau, o.variant));
      break;
    }
    case Backend::Wigner: {
      WignerOptions w;
      w.tol = o.ode_tol;
      w.n_threads = o.n_threads;
      auto ens =
          integrate_ensemble(sample_initial(params, o.rng_seed, o.trajectories), grid, w);
      for (double tau : grid) out.push_back(wigner_report(ens, tau, o.variant));
      break;
    }
  }
  return out;
}

// EPR optimum defines tau/theta0/upsilon; the other two measures are
// minimized over their own times
EntanglementReport time_optimized(const std::vector<EntanglementReport>& reports) {
  EntanglementReport best = optimize_time(reports, PhaseObjective::EPR);
  const EntanglementReport xr = optimize_time(reports, PhaseObjective::TwoModeMinus);
  const EntanglementReport ir = optimize_time(reports, PhaseObjective::Insep);
  best.var_xminus_min = xr.var_xminus_min;
  best.var_xminus_min_err = xr.var_xminus_min_err;
  best.insep_ratio = ir.insep_ratio;
  best.insep_ratio_err = ir.insep_ratio_err;
  return best;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Exact: return "exact";
    case Backend::Wigner: return "wigner";
    case Backend::Analytic: return "analytic";
  }
  fail(errc::invalid_parameter, "unknown backend");
}

const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Tau: return "tau";
    case SweepAxis::NbarTh: return "nbar_th";
    case SweepAxis::N0: return "n0";
    case SweepAxis::Theta: return "theta";
  }
  fail(errc::invalid_parameter, "unknown sweep axis");
}

std::vector<double> default_tau_grid(double tau_max, std::size_t points) {
  require(tau_max > 0.0, errc::invalid_parameter, "tau_max must be > 0");
  require(points >= 2, errc::invalid_parameter, "tau grid needs at least 2 points");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = tau_max * double(i) / double(points - 1);
  // keep the reference measurement time an exact grid lookup
  if (kMeasurementTau < tau_max) {
    auto it = std::lower_bound(g.begin(), g.end(), kMeasurementTau);
    const bool hit = (it != g.end() && *it - kMeasurementTau < 1e-12) ||
                     (it != g.begin() && kMeasurementTau - *(it - 1) < 1e-12);
    if (!hit) g.insert(it, kMeasurementTau);
  }
  return g;
}

SweepResult sweep_tau(const ModelParams& params, const std::vector<double>& tau_grid,
                      Backend backend, const SweepOptions& options) {
  params.validate_for_run();
  check_grid(tau_grid);
  SweepResult r;
  r.axis = SweepAxis::Tau;
  r.backend = backend;
  r.params = params;
  r.rng_seed = options.rng_seed;
  r.trajectories = backend == Backend::Wigner ? options.trajectories : 0;
  if (tau_grid.empty()) return r;
  auto reports = reports_over_grid(params, tau_grid, backend, options);
  r.points.resize(tau_grid.size());
  for (std::size_t i = 0; i < tau_grid.size(); ++i)
    r.points[i] = {tau_grid[i], reports[i]};
  return r;
}

SweepResult sweep_seed(double n0, const std::vector<double>& seed_list, Backend backend,
                       SeedKind kind, const SweepOptions& options) {
  require(!seed_list.empty(), errc::invalid_parameter, "seed list is empty");
  for (std::size_t i = 0; i < seed_list.size(); ++i) {
    require(seed_list[i] >= 0.0, errc::invalid_parameter, "seed occupations must be >= 0");
    if (i > 0)
      require(seed_list[i] > seed_list[i - 1], errc::invalid_parameter,
              "seed list must be strictly increasing");
  }
  const auto grid = default_tau_grid(options.tau_max, options.tau_points);

  SweepResult r;
  r.axis = SweepAxis::NbarTh;
  r.backend = backend;
  r.params = seeded_params(n0, kind, seed_list.back());
  r.rng_seed = options.rng_seed;
  r.trajectories = backend == Backend::Wigner ? options.trajectories : 0;
  r.points.reserve(seed_list.size());
  for (double v : seed_list) {
    auto reports = reports_over_grid(seeded_params(n0, kind, v), grid, backend, options);
    r.points.push_back({v, time_optimized(reports)});
  }
  return r;
}

double nth_threshold(double n0, double tol, Backend backend, const SweepOptions& options) {
  require(n0 > 0.0, errc::invalid_parameter, "n0 must be > 0");
  require(tol > 0.0, errc::invalid_parameter, "threshold tolerance must be > 0");
  if (backend == Backend::Analytic) return nth_max_ud(n0, tol);
  require(backend == Backend::Wigner, errc::unsupported_configuration,
          "threshold search needs a backend that supports thermal seeds");

  const auto grid = default_tau_grid(options.tau_max, options.tau_points);
  auto ups_min = [&](double nbar) {
    auto reports =
        reports_over_grid(seeded_params(n0, SeedKind::Thermal, nbar), grid,
                          Backend::Wigner, options);
    return optimize_time(reports, PhaseObjective::EPR).upsilon;
  };

  double lo = 0.0;
  require(ups_min(0.0) < 1.0, errc::root_not_found, "no EPR entanglement at zero seed");
  double hi = 1.0;
  while (ups_min(hi) < 1.0) {
    lo = hi;
    hi *= 2.0;
    require(hi <= 32.0, errc::root_not_found,
            "EPR entanglement survives every tested seed occupation");
  }
  while (hi - lo > 2.0 * tol) {
    const double mid = 0.5 * (lo + hi);
    (ups_min(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  require(points.size() >= 4, errc::invalid_parameter,
          "power-law fit needs at least 4 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    require(x > 0.0 && y > 0.0, errc::invalid_data,
            "power-law fit needs strictly positive coordinates");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = double(points.size());
  const double denom = n * sxx - sx * sx;
  require(std::abs(denom) > 1e-12 * n * sxx, errc::invalid_data,
          "power-law fit abscissas are degenerate");
  PowerLawFit f;
  f.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - f.exponent * sx) / n;
  f.prefactor = std::exp(intercept);
  double rss = 0;
  f.n0_min = points.front().first;
  f.n0_max = points.front().first;
  for (const auto& [x, y] : points) {
    const double resid = std::log(y) - (intercept + f.exponent * std::log(x));
    rss += resid * resid;
    f.n0_min = std::min(f.n0_min, x);
    f.n0_max = std::max(f.n0_max, x);
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

namespace {

constexpr FigureId kAllFigures[] = {FigureId::F1a, FigureId::F1b, FigureId::F2a,
                                    FigureId::F2b, FigureId::F2c, FigureId::F2d,
                                    FigureId::F3a, FigureId::F3b, FigureId::F3c,
                                    FigureId::F4a, FigureId::F4b};

std::vector<double> default_n0(FigureId id) {
  switch (id) {
    case FigureId::F1b:
    case FigureId::F2b:
    case FigureId::F3a:
      return {175};
    case FigureId::F2d:
    case FigureId::F3c:
    case FigureId::F4b:
      return {100, 150, 200, 250, 300, 350, 400};
    default:
      return {150, 175, 200};
  }
}

std::vector<double> default_seed_values(FigureId id) {
  switch (id) {
    case FigureId::F1a:
    case FigureId::F2a:
      return {};  // vacuum only
    case FigureId::F1b:
    case FigureId::F2b:
      return {0.5, 1, 2};
    case FigureId::F3a:
      return {1};
    case FigureId::F2d:
    case FigureId::F3c:
    case FigureId::F4b:
      return {0, 1, 2};
    default:  // seed-axis panels
      return {0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2};
  }
}

std::string curve_tag(const char* base, double value) {
  return std::string(base) + "(nbar=" + format_g17(value) + ")";
}

bool contains(const std::vector<double>& v, double x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

struct FigureWriter {
  FigureId id;
  const FigureOptions& opt;
  SweepOptions so;
  std::vector<std::string> files;

  FigureWriter(FigureId id_, const FigureOptions& o) : id(id_), opt(o) {
    so.trajectories = o.trajectories;
    so.rng_seed = o.rng_seed;
    so.tau_max = o.tau_max;
    so.tau_points = o.tau_points;
    so.n_threads = o.n_threads;
  }

  void emit(const std::string& n0_token, const char* seed_token,
            const std::vector<CsvColumn>& columns) {
    std::ostringstream os;
    write_csv(os, columns);
    const std::string name =
        std::string(figure_id_name(id)) + "_" + n0_token + "_" + seed_token + ".csv";
    files.push_back(write_text_file(opt.out_dir, name, os.str()));
  }
};

// population / EPR evolution panels (exact backend, vacuum)
void vacuum_tau_panels(FigureWriter& w, const std::vector<double>& n0s,
                       const std::vector<double>& grid) {
  for (double n0 : n0s) {
    auto sr = sweep_tau(seeded_params(n0, SeedKind::Vacuum, 0), grid, Backend::Exact, w.so);
    std::vector<CsvColumn> cols;
    CsvColumn tau{"tau[dimensionless]", {}};
    for (const auto& p : sr.points) tau.values.push_back(p.x);
    cols.push_back(std::move(tau));
    if (w.id == FigureId::F1a) {
      CsvColumn pop{"frac_pop[dimensionless]", {}};
      for (const auto& p : sr.points) pop.values.push_back(p.report.n_signal / n0);
      cols.push_back(std::move(pop));
      if (n0 == 175.0) {  // the published comparison curve: no phase matching
        ModelParams detuned = seeded_params(n0, SeedKind::Vacuum, 0);
        detuned.q_over_g = 0.0;
        auto sq = sweep_tau(detuned, grid, Backend::Exact, w.so);
        CsvColumn pop0{"frac_pop_q0[dimensionless]", {}};
        for (const auto& p : sq.points) pop0.values.push_back(p.report.n_signal / n0);
        cols.push_back(std::move(pop0));
      }
    } else {  // F2a
      UndepletedParams u;
      u.n0 = n0;
      CsvColumn ups{"upsilon[dimensionless]", {}};
      CsvColumn th{"theta0[rad]", {}};
      CsvColumn ud{"ud_upsilon[dimensionless]", {}};
      for (const auto& p : sr.points) {
        ups.values.push_back(p.report.upsilon);
        th.values.push_back(p.report.theta0);
        ud.values.push_back(epr_ud(u, p.x));
      }
      cols.push_back(std::move(ups));
      cols.push_back(std::move(th));
      cols.push_back(std::move(ud));
    }
    w.emit(format_g17(n0), "vacuum", cols);
  }
}

// thermally seeded evolution panels (Wigner backend + undepleted references)
void thermal_tau_panels(FigureWriter& w, const std::vector<double>& n0s,
                        const std::vector<double>& nbars, const std::vector<double>& grid) {
  for (double n0 : n0s) {
    std::vector<CsvColumn> cols;
    CsvColumn tau{"tau[dimensionless]", {}};
    for (double t : grid) tau.values.push_back(t);
    cols.push_back(std::move(tau));
    for (double v : nbars) {
      auto sr = sweep_tau(seeded_params(n0, SeedKind::Thermal, v), grid, Backend::Wigner,
                          w.so);
      UndepletedParams u;
      u.n0 = n0;
      u.nbar = v;
      if (w.id == FigureId::F1b) {
        CsvColumn pop{curve_tag("frac_pop", v) + "[dimensionless]", {}};
        CsvColumn err{curve_tag("frac_pop_err", v) + "[dimensionless]", {}};
        CsvColumn ud{curve_tag("ud_frac_pop", v) + "[dimensionless]", {}};
        for (const auto& p : sr.points) {
          pop.values.push_back(p.report.n_signal / n0);
          err.values.push_back(p.report.n_signal_err / n0);
          ud.values.push_back(population_ud(u, p.x) / n0);
        }
        cols.push_back(std::move(pop));
        cols.push_back(std::move(err));
        cols.push_back(std::move(ud));
      } else {  // F2b
        CsvColumn ups{curve_tag("upsilon", v) + "[dimensionless]", {}};
        CsvColumn err{curve_tag("upsilon_err", v) + "[dimensionless]", {}};
        CsvColumn ud{curve_tag("ud_upsilon", v) + "[dimensionless]", {}};
        for (const auto& p : sr.points) {
          ups.values.push_back(p.report.upsilon);
          err.values.push_back(p.report.upsilon_err);
          ud.values.push_back(epr_ud(u, p.x));
        }
        cols.push_back(std::move(ups));
        cols.push_back(std::move(err));
        cols.push_back(std::move(ud));
      }
    }
    w.emit(format_g17(n0), "thermal", cols);
  }
}

// time-optimized measures against seed occupation (one file per N0, plus the
// coherent-seed comparison at N0 = 175)
void seed_axis_panels(FigureWriter& w, const std::vector<double>& n0s,
                      const std::vector<double>& nbars) {
  auto value_of = [&](const EntanglementReport& r) {
    switch (w.id) {
      case FigureId::F2c: return std::pair<double, double>{r.upsilon, r.upsilon_err};
      case FigureId::F3b:
        return std::pair<double, double>{r.var_xminus_min, r.var_xminus_min_err};
      default: return std::pair<double, double>{r.insep_ratio, r.insep_ratio_err};
    }
  };
  const char* base = w.id == FigureId::F2c   ? "upsilon_min"
                     : w.id == FigureId::F3b ? "var_xminus_min"
                                             : "insep_min";
  for (double n0 : n0s) {
    auto sr = sweep_seed(n0, nbars, Backend::Wigner, SeedKind::Thermal, w.so);
    std::vector<CsvColumn> cols;
    CsvColumn x{"nbar_th[dimensionless]", {}};
    CsvColumn val{std::string(base) + "[dimensionless]", {}};
    CsvColumn err{std::string(base) + "_err[dimensionless]", {}};
    for (const auto& p : sr.points) {
      x.values.push_back(p.x);
      auto [v, e] = value_of(p.report);
      val.values.push_back(v);
      err.values.push_back(e);
    }
    cols.push_back(std::move(x));
    cols.push_back(std::move(val));
    cols.push_back(std::move(err));
    if (w.id == FigureId::F2c) {
      CsvColumn topt{"tau_opt_epr[dimensionless]", {}};
      CsvColumn ud{"ud_upsilon_min[dimensionless]", {}};
      for (const auto& p : sr.points) {
        topt.values.push_back(p.report.tau);
        UndepletedParams u;
        u.n0 = n0;
        u.nbar = p.x;
        ud.values.push_back(epr_min_ud(u));
      }
      cols.push_back(std::move(topt));
      cols.push_back(std::move(ud));
    }
    w.emit(format_g17(n0), "thermal", cols);
  }
  if (contains(n0s, 175.0)) {
    auto sc = sweep_seed(175.0, nbars, Backend::Wigner, SeedKind::Coherent, w.so);
    std::vector<CsvColumn> cols;
    CsvColumn x{"alpha_sq[dimensionless]", {}};
    CsvColumn val{std::string(base) + "[dimensionless]", {}};
    CsvColumn err{std::string(base) + "_err[dimensionless]", {}};
    for (const auto& p : sc.points) {
      x.values.push_back(p.x);
      auto [v, e] = value_of(p.report);
      val.values.push_back(v);
      err.values.push_back(e);
    }
    cols.push_back(std::move(x));
    cols.push_back(std::move(val));
    cols.push_back(std::move(err));
    w.emit("175", "coherent", cols);
  }
}

// time-optimized measures against N0, one curve per thermal seed
void n0_axis_panels(FigureWriter& w, const std::vector<double>& n0s,
                    const std::vector<double>& nbars) {
  std::vector<CsvColumn> cols;
  CsvColumn x{"n0[atoms]", {}};
  for (double n0 : n0s) x.values.push_back(n0);
  cols.push_back(std::move(x));
  const char* base = w.id == FigureId::F2d   ? "upsilon_min"
                     : w.id == FigureId::F3c ? "var_xminus_min"
                                             : "insep_min";
  for (double v : nbars) {
    CsvColumn val{curve_tag(base, v) + "[dimensionless]", {}};
    CsvColumn err{curve_tag((std::string(base) + "_err").c_str(), v) + "[dimensionless]",
                  {}};
    CsvColumn ud{curve_tag("ud_upsilon_min", v) + "[dimensionless]", {}};
    for (double n0 : n0s) {
      auto sr = sweep_seed(n0, {v}, Backend::Wigner, SeedKind::Thermal, w.so);
      const EntanglementReport& r = sr.points.front().report;
      switch (w.id) {
        case FigureId::F2d:
          val.values.push_back(r.upsilon);
          err.values.push_back(r.upsilon_err);
          break;
        case FigureId::F3c:
          val.values.push_back(r.var_xminus_min);
          err.values.push_back(r.var_xminus_min_err);
          break;
        default:
          val.values.push_back(r.insep_ratio);
          err.values.push_back(r.insep_ratio_err);
          break;
      }
      if (w.id == FigureId::F2d) {
        UndepletedParams u;
        u.n0 = n0;
        u.nbar = v;
        ud.values.push_back(epr_min_ud(u));
      }
    }
    cols.push_back(std::move(val));
    cols.push_back(std::move(err));
    if (w.id == FigureId::F2d) cols.push_back(std::move(ud));
  }
  w.emit("all", "thermal", cols);
}

// two-mode quadrature variances against the local-oscillator angle at the
// measurement time, centered on each curve's own optimum
void theta_panels(FigureWriter& w, const std::vector<double>& n0s,
                  const std::vector<double>& nbars) {
  const double tau = kMeasurementTau;
  std::vector<double> theta_rel(w.opt.theta_points);
  for (std::size_t i = 0; i < theta_rel.size(); ++i)
    theta_rel[i] = -std::numbers::pi / 2 +
                   std::numbers::pi * double(i) / double(theta_rel.size() - 1);

  for (double n0 : n0s) {
    {  // vacuum reference (exact backend, no sampling error)
      auto m = evolve_moments(init_coherent_pump(seeded_params(n0, SeedKind::Vacuum, 0)),
                              {tau})
                   .front();
      const double th0 = optimize_phase(m, PhaseObjective::TwoModeMinus).theta0;
      std::vector<CsvColumn> cols{{"theta_rel[rad]", theta_rel},
                                  {"var_xminus[dimensionless]", {}},
                                  {"var_xplus[dimensionless]", {}}};
      for (double t : theta_rel) {
        cols[1].values.push_back(two_mode_variance(m, th0 + t, -1));
        cols[2].values.push_back(two_mode_variance(m, th0 + t, +1));
      }
      w.emit(format_g17(n0), "vacuum", cols);
    }
    for (SeedKind kind : {SeedKind::Thermal, SeedKind::Coherent}) {
      const char* token = kind == SeedKind::Thermal ? "thermal" : "coherent";
      std::vector<CsvColumn> cols{{"theta_rel[rad]", theta_rel}};
      for (double v : nbars) {
        WignerOptions wopt;
        wopt.tol = w.so.ode_tol;
        wopt.n_threads = w.opt.n_threads;
        auto ens = integrate_ensemble(
            sample_initial(seeded_params(n0, kind, v), w.so.rng_seed, w.so.trajectories),
            {tau}, wopt);
        MomentSet m = moments_wigner(ens, tau);
        const double th0 = optimize_phase(m, PhaseObjective::TwoModeMinus).theta0;
        const std::size_t nblocks = ens.sums.front().size();
        std::vector<MomentSet> loo;
        loo.reserve(nblocks);
        for (std::size_t b = 0; b < nblocks; ++b)
          loo.push_back(moments_wigner(ens, tau, b));
        auto scan = [&](int sign, const char* name) {
          CsvColumn val{curve_tag(name, v) + "[dimensionless]", {}};
          CsvColumn err{curve_tag((std::string(name) + "_err").c_str(), v) +
                            "[dimensionless]",
                        {}};
          for (double t : theta_rel) {
            val.values.push_back(two_mode_variance(m, th0 + t, sign));
            double mean = 0;
            for (const auto& mb : loo) mean += two_mode_variance(mb, th0 + t, sign);
            mean /= double(nblocks);
            double var = 0;
            for (const auto& mb : loo) {
              const double d = two_mode_variance(mb, th0 + t, sign) - mean;
              var += d * d;
            }
            err.values.push_back(
                std::sqrt(var * double(nblocks - 1) / double(nblocks)));
          }
          cols.push_back(std::move(val));
          cols.push_back(std::move(err));
        };
        scan(-1, "var_xminus");
        if (kind == SeedKind::Thermal) scan(+1, "var_xplus");
      }
      w.emit(format_g17(n0), token, cols);
    }
  }
}

}  // namespace

const char* figure_id_name(FigureId id) {
  switch (id) {
    case FigureId::F1a: return "F1a";
    case FigureId::F1b: return "F1b";
    case FigureId::F2a: return "F2a";
    case FigureId::F2b: return "F2b";
    case FigureId::F2c: return "F2c";
    case FigureId::F2d: return "F2d";
    case FigureId::F3a: return "F3a";
    case FigureId::F3b: return "F3b";
    case FigureId::F3c: return "F3c";
    case FigureId::F4a: return "F4a";
    case FigureId::F4b: return "F4b";
  }
  fail(errc::invalid_parameter, "unknown figure id");
}

FigureId parse_figure_id(const std::string& name) {
  for (FigureId id : kAllFigures)
    if (name == figure_id_name(id)) return id;
  fail(errc::invalid_parameter, "unknown figure id: " + name);
}

std::vector<std::string> figure_dataset(FigureId id, const FigureOptions& options) {
  const std::vector<double> n0s =
      options.n0_list.empty() ? default_n0(id) : options.n0_list;
  std::vector<double> seeds =
      options.nbar_list.empty() ? default_seed_values(id) : options.nbar_list;
  for (double n0 : n0s)
    require(n0 > 0.0, errc::invalid_parameter, "n0 must be > 0");

  FigureWriter w(id, options);
  const auto grid = default_tau_grid(options.tau_max, options.tau_points);
  const char* backend_used = "wigner";
  switch (id) {
    case FigureId::F1a:
    case FigureId::F2a:
      vacuum_tau_panels(w, n0s, grid);
      backend_used = "exact";
      break;
    case FigureId::F1b:
    case FigureId::F2b:
      thermal_tau_panels(w, n0s, seeds, grid);
      break;
    case FigureId::F2c:
    case FigureId::F3b:
    case FigureId::F4a:
      seed_axis_panels(w, n0s, seeds);
      break;
    case FigureId::F2d:
    case FigureId::F3c:
    case FigureId::F4b:
      n0_axis_panels(w, n0s, seeds);
      break;
    case FigureId::F3a:
      theta_panels(w, n0s, seeds);
      backend_used = "exact+wigner";
      break;
  }

  json manifest;
  manifest["figure"] = figure_id_name(id);
  manifest["code_version"] = version_string();
  manifest["backend"] = backend_used;
  manifest["rng_seed"] = options.rng_seed;
  manifest["trajectories"] = options.trajectories;
  manifest["n0"] = n0s;
  manifest["seed_values"] = seeds;
  manifest["tau_grid"] = {{"min", 0.0},
                          {"max", options.tau_max},
                          {"points", options.tau_points},
                          {"measurement_tau", kMeasurementTau}};
  manifest["theta_points"] = options.theta_points;
  manifest["q_over_g"] = "matched";
  manifest["inferred_variant"] = "optimal";
  std::vector<std::string> names;
  for (const auto& f : w.files)
    names.push_back(f.substr(f.find_last_of('/') + 1));
  manifest["files"] = names;
  w.files.push_back(write_text_file(
      options.out_dir, std::string(figure_id_name(id)) + "_manifest.json",
      manifest.dump(2) + "\n"));
  return w.files;
}

}
