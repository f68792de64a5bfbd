// spinepr: command-line front end for the spin-changing-collision toolkit.
//
// Subcommands produce CSV tables plus a JSON run manifest that records every
// parameter needed to reproduce the data files byte-for-byte (the manifest
// itself additionally records wall-clock time, so it is the one file that
// differs between reruns).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinepr/analytic.hpp"
#include "spinepr/dense.hpp"
#include "spinepr/errors.hpp"
#include "spinepr/exact.hpp"
#include "spinepr/io.hpp"
#include "spinepr/measures.hpp"
#include "spinepr/model.hpp"
#include "spinepr/scans.hpp"
#include "spinepr/version.hpp"

namespace {

using nlohmann::json;
using namespace spinepr;

struct CliConfig {
  double n0 = 175.0;
  std::string q = "matched";
  std::string seed = "vacuum";
  double nbar = 0.0;
  double alpha_sq = 0.0;
  double tau_max = 0.012;
  std::size_t tau_steps = 600;
  std::size_t theta_steps = 181;
  std::uint64_t trajectories = 20000;
  std::uint64_t rng_seed = 1;
  double tol = 1e-10;
  double threshold_tol = 0.02;
  std::string backend;  // empty -> per-subcommand default
  std::string inferred = "optimal";
  std::string out;  // empty -> $SPINEPR_OUT_DIR or "."
  unsigned threads = 0;
  std::vector<double> n0_list;
  std::vector<double> seed_list;
};

// ---------------------------------------------------------------------------
// config file: flat "key = value" lines, '#' comments, flags override

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    require(pos == v.size(), errc::invalid_parameter, "");
    return x;
  } catch (...) {
    fail(errc::invalid_parameter, "config key '" + key + "': not a number: " + v);
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string cell;
  while (std::getline(is, cell, ',')) out.push_back(parse_double(key, trim(cell)));
  return out;
}

void apply_config_entry(CliConfig& c, const std::string& key, const std::string& v) {
  if (key == "n0") c.n0 = parse_double(key, v);
  else if (key == "q") c.q = v;
  else if (key == "seed.kind") c.seed = v;
  else if (key == "seed.nbar") c.nbar = parse_double(key, v);
  else if (key == "seed.alpha_sq") c.alpha_sq = parse_double(key, v);
  else if (key == "tau_max") c.tau_max = parse_double(key, v);
  else if (key == "tau_steps") c.tau_steps = std::size_t(parse_double(key, v));
  else if (key == "theta_steps") c.theta_steps = std::size_t(parse_double(key, v));
  else if (key == "trajectories") c.trajectories = std::uint64_t(parse_double(key, v));
  else if (key == "rng_seed") c.rng_seed = std::uint64_t(parse_double(key, v));
  else if (key == "tol") c.tol = parse_double(key, v);
  else if (key == "threshold_tol") c.threshold_tol = parse_double(key, v);
  else if (key == "backend") c.backend = v;
  else if (key == "inferred") c.inferred = v;
  else if (key == "out") c.out = v;
  else if (key == "threads") c.threads = unsigned(parse_double(key, v));
  else if (key == "n0_list") c.n0_list = parse_list(key, v);
  else if (key == "seed_list") c.seed_list = parse_list(key, v);
  else fail(errc::invalid_parameter, "unknown config key: " + key);
}

void load_config_file(CliConfig& c, const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::invalid_data, "cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, errc::invalid_data,
            "config line is not 'key = value': " + line);
    apply_config_entry(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

// ---------------------------------------------------------------------------
// resolved settings

ModelParams params_of(const CliConfig& c) {
  ModelParams p;
  p.n0_mean = c.n0;
  if (c.q == "matched") p.q_over_g = c.n0;
  else p.q_over_g = parse_double("q", c.q);
  if (c.seed == "vacuum") p.seed.kind = SeedKind::Vacuum;
  else if (c.seed == "thermal") p.seed.kind = SeedKind::Thermal;
  else if (c.seed == "coherent") p.seed.kind = SeedKind::Coherent;
  else fail(errc::invalid_parameter, "unknown seed kind: " + c.seed);
  if (p.seed.kind == SeedKind::Thermal) p.seed.nbar_th = c.nbar;
  if (p.seed.kind == SeedKind::Coherent) p.seed.alpha_seed_sq = c.alpha_sq;
  p.validate_for_run();
  return p;
}

Backend backend_of(const CliConfig& c, Backend fallback) {
  if (c.backend.empty()) return fallback;
  if (c.backend == "exact") return Backend::Exact;
  if (c.backend == "wigner") return Backend::Wigner;
  if (c.backend == "analytic") return Backend::Analytic;
  fail(errc::invalid_parameter, "unknown backend: " + c.backend);
}

InferredVariant variant_of(const CliConfig& c) {
  if (c.inferred == "optimal") return InferredVariant::Optimal;
  if (c.inferred == "symdiff") return InferredVariant::SymmetricDifference;
  fail(errc::invalid_parameter, "unknown inferred-variance variant: " + c.inferred);
}

SweepOptions sweep_options_of(const CliConfig& c) {
  SweepOptions so;
  so.trajectories = c.trajectories;
  so.rng_seed = c.rng_seed;
  so.ode_tol = c.tol;
  so.tau_max = c.tau_max;
  so.tau_points = c.tau_steps;
  so.variant = variant_of(c);
  so.n_threads = c.threads;
  return so;
}

std::string out_dir_of(const CliConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("SPINEPR_OUT_DIR"); env && *env) return env;
  return ".";
}

// canonical re-run command: every setting resolved and spelled out
std::string canonical_command(const std::string& sub, const CliConfig& c,
                              Backend backend, const std::string& extra_arg) {
  std::ostringstream os;
  os << "spinepr " << sub;
  if (!extra_arg.empty()) os << " " << extra_arg;
  os << " --n0 " << format_g17(c.n0) << " --q " << c.q << " --seed " << c.seed;
  if (c.nbar != 0) os << " --nbar " << format_g17(c.nbar);
  if (c.alpha_sq != 0) os << " --alpha-sq " << format_g17(c.alpha_sq);
  os << " --backend " << backend_name(backend) << " --inferred " << c.inferred
     << " --tau-max " << format_g17(c.tau_max) << " --tau-steps " << c.tau_steps
     << " --theta-steps " << c.theta_steps << " --trajectories " << c.trajectories
     << " --rng-seed " << c.rng_seed << " --tol " << format_g17(c.tol)
     << " --threshold-tol " << format_g17(c.threshold_tol) << " --threads " << c.threads;
  auto list = [&os](const char* flag, const std::vector<double>& v) {
    if (v.empty()) return;
    os << " " << flag << " ";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_g17(v[i]);
  };
  list("--n0-list", c.n0_list);
  list("--seed-list", c.seed_list);
  os << " --out " << out_dir_of(c);
  return os.str();
}

struct ManifestSink {
  std::string sub;
  const CliConfig& cfg;
  Backend backend;
  std::string extra_arg;  // positional (figure id), if any
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  json results = json::object();

  void add_warnings(const std::vector<std::string>& w) {
    for (const auto& s : w)
      if (std::find(warnings.begin(), warnings.end(), s) == warnings.end())
        warnings.push_back(s);
  }

  void collect(const SweepResult& sr) {
    for (const auto& p : sr.points) add_warnings(p.report.warnings);
  }

  std::string write() {
    const ModelParams p = params_of(cfg);
    json m;
    m["tool"] = "spinepr";
    m["version"] = version_string();
    m["subcommand"] = sub;
    m["command"] = canonical_command(sub, cfg, backend, extra_arg);
    m["params"] = {{"n0", p.n0_mean},
                   {"q_over_g", p.q_over_g},
                   {"seed",
                    {{"kind", seed_kind_name(p.seed.kind)},
                     {"nbar_th", p.seed.nbar_th},
                     {"alpha_sq", p.seed.alpha_seed_sq}}}};
    m["backend"] = backend_name(backend);
    m["rng_seed"] = cfg.rng_seed;
    m["trajectories"] = backend == Backend::Wigner ? cfg.trajectories : 0;
    m["grids"] = {{"tau_max", cfg.tau_max},
                  {"tau_steps", cfg.tau_steps},
                  {"measurement_tau", kMeasurementTau},
                  {"theta_steps", cfg.theta_steps}};
    if (!cfg.n0_list.empty()) m["grids"]["n0_list"] = cfg.n0_list;
    if (!cfg.seed_list.empty()) m["grids"]["seed_list"] = cfg.seed_list;
    m["tolerances"] = {{"ode_tol", cfg.tol}, {"threshold_tol", cfg.threshold_tol}};
    m["inferred_variant"] = cfg.inferred;
    m["threads"] = cfg.threads;
    std::vector<std::string> names;
    for (const auto& f : files) names.push_back(f.substr(f.find_last_of('/') + 1));
    m["files"] = names;
    m["warnings"] = warnings;
    if (!results.empty()) m["results"] = results;
    m["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return write_text_file(out_dir_of(cfg), sub + "_manifest.json", m.dump(2) + "\n");
  }
};

// ---------------------------------------------------------------------------
// subcommand bodies

int run_tau_sweep(const std::string& sub, const CliConfig& cfg) {
  const Backend backend = backend_of(cfg, Backend::Exact);
  ManifestSink sink{sub, cfg, backend, ""};
  const auto grid = default_tau_grid(cfg.tau_max, cfg.tau_steps);
  const SweepResult sr = sweep_tau(params_of(cfg), grid, backend, sweep_options_of(cfg));
  sink.collect(sr);
  const bool mc = backend == Backend::Wigner;

  std::vector<CsvColumn> cols{{"tau[dimensionless]", {}}};
  for (const auto& p : sr.points) cols[0].values.push_back(p.x);
  auto add = [&](const char* header, auto&& get) {
    CsvColumn col{header, {}};
    for (const auto& p : sr.points) col.values.push_back(get(p.report));
    cols.push_back(std::move(col));
  };
  if (sub == "populations") {
    add("n_signal[atoms]", [](const EntanglementReport& r) { return r.n_signal; });
    if (mc)
      add("n_signal_err[atoms]", [](const EntanglementReport& r) { return r.n_signal_err; });
    add("n_pump[atoms]", [](const EntanglementReport& r) { return r.n_pump; });
  } else if (sub == "epr") {
    add("upsilon[dimensionless]", [](const EntanglementReport& r) { return r.upsilon; });
    if (mc)
      add("upsilon_err[dimensionless]",
          [](const EntanglementReport& r) { return r.upsilon_err; });
    add("theta0[rad]", [](const EntanglementReport& r) { return r.theta0; });
  } else if (sub == "squeezing") {
    add("var_xminus_min[dimensionless]",
        [](const EntanglementReport& r) { return r.var_xminus_min; });
    if (mc)
      add("var_xminus_min_err[dimensionless]",
          [](const EntanglementReport& r) { return r.var_xminus_min_err; });
  } else {  // inseparability
    add("insep_ratio[dimensionless]",
        [](const EntanglementReport& r) { return r.insep_ratio; });
    if (mc)
      add("insep_ratio_err[dimensionless]",
          [](const EntanglementReport& r) { return r.insep_ratio_err; });
  }

  std::ostringstream os;
  write_csv(os, cols);
  sink.files.push_back(write_text_file(out_dir_of(cfg), sub + ".csv", os.str()));
  const std::string manifest = sink.write();
  std::cout << sink.files[0] << "\n" << manifest << "\n";
  return 0;
}

int run_scan_seed(const CliConfig& cfg) {
  const Backend backend = backend_of(cfg, Backend::Wigner);
  const SeedKind kind = cfg.seed == "coherent" ? SeedKind::Coherent : SeedKind::Thermal;
  std::vector<double> values = cfg.seed_list;
  if (values.empty()) values = {0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2};

  CliConfig resolved = cfg;
  resolved.seed = seed_kind_name(kind);
  resolved.seed_list = values;
  ManifestSink sink{"scan-seed", resolved, backend, ""};
  const SweepResult sr = sweep_seed(cfg.n0, values, backend, kind, sweep_options_of(cfg));
  sink.collect(sr);

  const bool mc = backend == Backend::Wigner;
  const char* axis = kind == SeedKind::Coherent ? "alpha_sq[dimensionless]"
                                                : "nbar_th[dimensionless]";
  std::vector<CsvColumn> cols{{axis, {}},
                              {"upsilon_min[dimensionless]", {}},
                              {"tau_opt_epr[dimensionless]", {}},
                              {"var_xminus_min[dimensionless]", {}},
                              {"insep_min[dimensionless]", {}}};
  CsvColumn ups_err{"upsilon_min_err[dimensionless]", {}};
  for (const auto& p : sr.points) {
    cols[0].values.push_back(p.x);
    cols[1].values.push_back(p.report.upsilon);
    cols[2].values.push_back(p.report.tau);
    cols[3].values.push_back(p.report.var_xminus_min);
    cols[4].values.push_back(p.report.insep_ratio);
    ups_err.values.push_back(p.report.upsilon_err);
  }
  if (mc) cols.insert(cols.begin() + 2, std::move(ups_err));

  std::ostringstream os;
  write_csv(os, cols);
  sink.files.push_back(write_text_file(out_dir_of(cfg), "scan_seed.csv", os.str()));
  const std::string manifest = sink.write();
  std::cout << sink.files[0] << "\n" << manifest << "\n";
  return 0;
}

int run_scan_n0(const CliConfig& cfg) {
  const Backend backend = backend_of(cfg, Backend::Wigner);
  const SeedKind kind = cfg.seed == "coherent" ? SeedKind::Coherent : SeedKind::Thermal;
  const double value = kind == SeedKind::Coherent ? cfg.alpha_sq : cfg.nbar;
  std::vector<double> n0s = cfg.n0_list;
  if (n0s.empty()) n0s = {100, 150, 200, 250, 300, 350, 400};

  CliConfig resolved = cfg;
  resolved.n0_list = n0s;
  ManifestSink sink{"scan-n0", resolved, backend, ""};
  std::vector<CsvColumn> cols{{"n0[atoms]", {}},
                              {"upsilon_min[dimensionless]", {}},
                              {"upsilon_min_err[dimensionless]", {}},
                              {"var_xminus_min[dimensionless]", {}},
                              {"insep_min[dimensionless]", {}}};
  for (double n0 : n0s) {
    const SweepResult sr = sweep_seed(n0, {value}, backend, kind, sweep_options_of(cfg));
    sink.collect(sr);
    const EntanglementReport& r = sr.points.front().report;
    cols[0].values.push_back(n0);
    cols[1].values.push_back(r.upsilon);
    cols[2].values.push_back(r.upsilon_err);
    cols[3].values.push_back(r.var_xminus_min);
    cols[4].values.push_back(r.insep_ratio);
  }

  std::ostringstream os;
  write_csv(os, cols);
  sink.files.push_back(write_text_file(out_dir_of(cfg), "scan_n0.csv", os.str()));
  const std::string manifest = sink.write();
  std::cout << sink.files[0] << "\n" << manifest << "\n";
  return 0;
}

int run_threshold(const CliConfig& cfg) {
  const Backend backend = backend_of(cfg, Backend::Wigner);
  ManifestSink sink{"threshold", cfg, backend, ""};
  const double th = nth_threshold(cfg.n0, cfg.threshold_tol, backend, sweep_options_of(cfg));
  sink.results = {{"nth_threshold", th}, {"half_width", cfg.threshold_tol}};

  std::ostringstream os;
  write_csv(os, {{"n0[atoms]", {cfg.n0}},
                 {"nth_threshold[dimensionless]", {th}},
                 {"half_width[dimensionless]", {cfg.threshold_tol}}});
  sink.files.push_back(write_text_file(out_dir_of(cfg), "threshold.csv", os.str()));
  const std::string manifest = sink.write();
  std::cout << "threshold(n0=" << format_g17(cfg.n0) << ") = " << format_g17(th)
            << " +/- " << format_g17(cfg.threshold_tol) << "\n"
            << sink.files[0] << "\n" << manifest << "\n";
  return 0;
}

int run_fit(const CliConfig& cfg) {
  const Backend backend = backend_of(cfg, Backend::Wigner);
  std::vector<double> n0s = cfg.n0_list;
  if (n0s.empty()) n0s = {100, 150, 200, 250, 300, 350, 400};

  CliConfig resolved = cfg;
  resolved.n0_list = n0s;
  ManifestSink sink{"fit", resolved, backend, ""};
  std::vector<std::pair<double, double>> pts;
  for (double n0 : n0s)
    pts.push_back({n0, nth_threshold(n0, cfg.threshold_tol, backend,
                                     sweep_options_of(cfg))});
  const PowerLawFit f = fit_power_law(pts);
  sink.results = {{"prefactor", f.prefactor},
                  {"exponent", f.exponent},
                  {"rms_log_residual", f.residual},
                  {"n0_min", f.n0_min},
                  {"n0_max", f.n0_max}};

  std::vector<CsvColumn> cols{{"n0[atoms]", {}}, {"nth_threshold[dimensionless]", {}}};
  for (const auto& [x, y] : pts) {
    cols[0].values.push_back(x);
    cols[1].values.push_back(y);
  }
  std::ostringstream os;
  write_csv(os, cols);
  sink.files.push_back(write_text_file(out_dir_of(cfg), "fit.csv", os.str()));
  const std::string manifest = sink.write();
  std::cout << "nth_max(N0) = " << format_g17(f.prefactor) << " * N0^"
            << format_g17(f.exponent) << "  (rms log residual " << format_g17(f.residual)
            << ")\n" << sink.files[0] << "\n" << manifest << "\n";
  return 0;
}

int run_analytic(const CliConfig& cfg) {
  ManifestSink sink{"analytic", cfg, Backend::Analytic, ""};
  UndepletedParams u;
  u.n0 = cfg.n0;
  u.nbar = cfg.nbar;
  const auto grid = default_tau_grid(cfg.tau_max, cfg.tau_steps);
  std::vector<CsvColumn> cols{{"tau[dimensionless]", {}},
                              {"ud_pop[atoms]", {}},
                              {"ud_upsilon[dimensionless]", {}},
                              {"ud_var_xminus[dimensionless]", {}},
                              {"ud_insep[dimensionless]", {}}};
  for (double tau : grid) {
    cols[0].values.push_back(tau);
    cols[1].values.push_back(population_ud(u, tau));
    cols[2].values.push_back(epr_ud(u, tau));
    cols[3].values.push_back(two_mode_var_ud(u, tau));
    cols[4].values.push_back(insep_ud(u, tau));
  }
  std::ostringstream os;
  write_csv(os, cols);
  sink.files.push_back(write_text_file(out_dir_of(cfg), "analytic.csv", os.str()));
  const std::string manifest = sink.write();
  std::cout << sink.files[0] << "\n" << manifest << "\n";
  return 0;
}

int run_figure(const CliConfig& cfg, const std::string& id_name) {
  const FigureId id = parse_figure_id(id_name);
  ManifestSink sink{"figure", cfg, Backend::Wigner, id_name};
  FigureOptions fo;
  fo.out_dir = out_dir_of(cfg);
  fo.n0_list = cfg.n0_list;
  fo.nbar_list = cfg.seed_list;
  fo.trajectories = cfg.trajectories;
  fo.rng_seed = cfg.rng_seed;
  fo.tau_max = cfg.tau_max;
  fo.tau_points = cfg.tau_steps;
  fo.theta_points = cfg.theta_steps;
  fo.n_threads = cfg.threads;
  const auto files = figure_dataset(id, fo);
  for (const auto& f : files) std::cout << f << "\n";
  // figure_dataset writes its own dataset manifest; the run manifest on top
  // records the CLI-level invocation
  sink.files = files;
  std::cout << sink.write() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// validate: oracle-equivalence and analytic-limit suites

struct ValidateReporter {
  bool all_ok = true;

  void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << " (" << detail << ")\n";
    all_ok = all_ok && ok;
  }
};

void validate_sector_vs_dense(ValidateReporter& vr) {
  ModelParams p;
  p.n0_mean = 4;
  p.q_over_g = 4;
  // same truncation on both sides: pump window [0,16], normalized (the dense
  // n_cut is the exclusive total-number bound)
  double worst = 0;
  for (double tau : {0.02, 0.05, 0.1}) {
    const auto states = evolve_exact(init_coherent_pump(p, 1e-14, 16), {tau});
    const MomentSet a = moments_exact(states.front());
    const MomentSet b = dense_oracle(p, tau, 17);
    const auto ea = a.entries(), eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i)
      worst = std::max(worst, std::abs(ea[i].value - eb[i].value));
  }
  vr.report("sector solver vs dense brute force (pump 4, cutoff 16)", worst <= 1e-8,
            "max |diff| = " + format_g17(worst));
}

void validate_rabi_sector(ValidateReporter& vr) {
  ModelParams p;
  p.n0_mean = 2;
  p.q_over_g = 0;
  SectorState s;
  s.params = p;
  s.n_min = s.n_max = 2;
  s.sectors[2] = Eigen::VectorXcd::Zero(2);
  s.sectors[2][0] = 1.0;  // |2, 0, 0>
  std::vector<double> grid;
  for (int i = 1; i <= 12; ++i) grid.push_back(0.1 * i);
  double worst = 0;
  const auto states = evolve_exact(s, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double pred = std::pow(std::sin(std::numbers::sqrt2 * grid[i]), 2);
    worst = std::max(worst, std::abs(moments_exact(states[i]).np - pred));
  }
  vr.report("two-atom pair Rabi oscillation vs sin^2(sqrt(2) tau)", worst <= 1e-10,
            "max |diff| = " + format_g17(worst));
}

void validate_short_time_limits(ValidateReporter& vr) {
  ModelParams p;  // defaults: N0 = 175, matched, vacuum
  std::vector<double> grid;
  for (int i = 1; i <= 8; ++i) grid.push_back(0.0005 * i);
  const auto moments = evolve_moments(init_coherent_pump(p), grid);

  double worst_pop = 0, worst_ups = 0, worst_insep = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double tau = grid[i];
    const EntanglementReport r = evaluate_report(moments[i], tau);
    const double pop_ref = std::pow(std::sinh(p.n0_mean * tau), 2);
    worst_pop = std::max(worst_pop, std::abs(r.n_signal / pop_ref - 1.0));
    if (tau <= 0.003) {
      const double ups_ref = 1.0 / std::pow(std::cosh(2 * p.n0_mean * tau), 2);
      worst_ups = std::max(worst_ups, std::abs(r.upsilon / ups_ref - 1.0));
      const double insep_ref = 1.0 - std::tanh(2 * p.n0_mean * tau);
      worst_insep = std::max(worst_insep, std::abs(r.insep_ratio / insep_ref - 1.0));
    }
  }
  vr.report("short-time pair population vs sinh^2(N0 tau), tau <= 0.004",
            worst_pop <= 0.05, "max rel dev = " + format_g17(worst_pop));
  vr.report("short-time EPR parameter vs cosh^-2(2 N0 tau), tau <= 0.003",
            worst_ups <= 0.10, "max rel dev = " + format_g17(worst_ups));
  vr.report("short-time inseparability vs 1 - tanh(2 N0 tau), tau <= 0.003",
            worst_insep <= 0.10, "max rel dev = " + format_g17(worst_insep));
}

int run_validate() {
  ValidateReporter vr;
  validate_sector_vs_dense(vr);
  validate_rabi_sector(vr);
  validate_short_time_limits(vr);
  std::cout << (vr.all_ok ? "validate: all checks passed\n"
                          : "validate: FAILURES detected\n");
  return vr.all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig cfg;

  // config file first so explicit flags override it
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--config" && i + 1 < argc) load_config_file(cfg, argv[i + 1]);
      else if (a.rfind("--config=", 0) == 0) load_config_file(cfg, a.substr(9));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"three-mode spin-changing-collision entanglement toolkit"};
  app.require_subcommand(1);
  std::string config_path;  // consumed above; declared so parsing accepts it
  app.add_option("--config", config_path, "flat key = value config file; flags override");
  app.add_option("--n0", cfg.n0, "initial mean pump atom number");
  app.add_option("--q", cfg.q, "quadratic shift q/g as a number, or 'matched' for q = g N0");
  app.add_option("--seed", cfg.seed, "seed kind: vacuum | thermal | coherent");
  app.add_option("--nbar", cfg.nbar, "thermal seed occupation per mode");
  app.add_option("--alpha-sq", cfg.alpha_sq, "coherent seed |alpha|^2 per mode");
  app.add_option("--tau-max", cfg.tau_max, "end of the dimensionless time grid");
  app.add_option("--tau-steps", cfg.tau_steps, "time grid point count");
  app.add_option("--theta-steps", cfg.theta_steps, "phase grid point count (figures)");
  app.add_option("--trajectories", cfg.trajectories, "Monte Carlo trajectory count");
  app.add_option("--rng-seed", cfg.rng_seed, "master RNG seed");
  app.add_option("--tol", cfg.tol, "ODE integrator relative tolerance");
  app.add_option("--threshold-tol", cfg.threshold_tol,
                 "bisection half-width for threshold searches");
  app.add_option("--backend", cfg.backend, "exact | wigner | analytic");
  app.add_option("--inferred", cfg.inferred, "inferred-variance variant: optimal | symdiff");
  app.add_option("--out", cfg.out, "output directory (default $SPINEPR_OUT_DIR or '.')");
  app.add_option("--threads", cfg.threads, "worker thread cap (0 = hardware default)");
  app.add_option("--n0-list", cfg.n0_list, "comma-separated N0 grid (scan-n0, fit)")
      ->delimiter(',');
  app.add_option("--seed-list", cfg.seed_list,
                 "comma-separated seed occupations (scan-seed, figures)")
      ->delimiter(',');

  auto* populations =
      app.add_subcommand("populations", "pair population vs tau");
  auto* epr = app.add_subcommand("epr", "EPR parameter Upsilon vs tau");
  auto* squeezing =
      app.add_subcommand("squeezing", "minimal two-mode variance vs tau");
  auto* insep =
      app.add_subcommand("inseparability", "inseparability ratio vs tau");
  auto* scan_seed = app.add_subcommand(
      "scan-seed", "time-optimized measures vs seed occupation");
  auto* scan_n0 =
      app.add_subcommand("scan-n0", "time-optimized measures vs pump atom number");
  auto* threshold = app.add_subcommand(
      "threshold", "thermal occupation where the EPR criterion is lost");
  auto* fit = app.add_subcommand("fit", "power-law fit of thresholds over N0");
  auto* analytic =
      app.add_subcommand("analytic", "closed-form undepleted-pump curves");
  auto* figure = app.add_subcommand("figure", "emit a named dataset bundle");
  std::string figure_id;
  figure->add_option("id", figure_id, "dataset id, e.g. F2a")->required();
  auto* validate = app.add_subcommand(
      "validate", "run oracle-equivalence and analytic-limit checks");
  for (auto* sub : {populations, epr, squeezing, insep, scan_seed, scan_n0, threshold,
                    fit, analytic, figure, validate})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage error
    return 1;
  }

  try {
    if (populations->parsed()) return run_tau_sweep("populations", cfg);
    if (epr->parsed()) return run_tau_sweep("epr", cfg);
    if (squeezing->parsed()) return run_tau_sweep("squeezing", cfg);
    if (insep->parsed()) return run_tau_sweep("inseparability", cfg);
    if (scan_seed->parsed()) return run_scan_seed(cfg);
    if (scan_n0->parsed()) return run_scan_n0(cfg);
    if (threshold->parsed()) return run_threshold(cfg);
    if (fit->parsed()) return run_fit(cfg);
    if (analytic->parsed()) return run_analytic(cfg);
    if (figure->parsed()) return run_figure(cfg, figure_id);
    if (validate->parsed()) return run_validate();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;  // unreachable with require_subcommand(1)
}
