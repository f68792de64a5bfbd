#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinepr/analytic.hpp"
#include "spinepr/errors.hpp"
#include "spinepr/io.hpp"
#include "spinepr/measures.hpp"
#include "spinepr/scans.hpp"

using namespace spinepr;

TEST_SUITE_BEGIN("scans");

namespace {

errc thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return errc::invalid_data;  // sentinel: nothing thrown
}

ModelParams matched_vacuum(double n0) {
  ModelParams p;
  p.n0_mean = n0;
  p.q_over_g = n0;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// header line + column-major numbers
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> cols;
};

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream is(text);
  std::string line;
  REQUIRE(std::getline(is, line));
  std::istringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.headers.push_back(cell);
  t.cols.resize(t.headers.size());
  while (std::getline(is, line)) {
    std::istringstream rs(line);
    std::size_t c = 0;
    while (std::getline(rs, cell, ',')) {
      REQUIRE(c < t.cols.size());
      t.cols[c++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    REQUIRE(c == t.cols.size());
  }
  return t;
}

std::string fresh_dir(const char* name) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("default tau grid contains the measurement time") {
  const auto g = default_tau_grid(0.012, 600);
  CHECK(g.size() == 601);  // uniform grid plus the inserted reference time
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 0.012);
  bool has_tp = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == kMeasurementTau) has_tp = true;
    if (i > 0) CHECK(g[i] > g[i - 1]);
  }
  CHECK(has_tp);

  // no duplicate insertion when the reference time is already a grid point
  const auto g2 = default_tau_grid(2 * kMeasurementTau, 3);
  CHECK(g2.size() == 3);
  CHECK(g2[1] == kMeasurementTau);

  CHECK(thrown_code([] { (void)default_tau_grid(0.0, 10); }) == errc::invalid_parameter);
  CHECK(thrown_code([] { (void)default_tau_grid(0.01, 1); }) == errc::invalid_parameter);
}

TEST_CASE("power-law fit recovers exact scaling laws") {
  const std::vector<double> grid = {100, 150, 200, 250, 300, 350, 400};

  SUBCASE("synthetic identities") {
    for (auto [a, b] : {std::pair{0.05, 2.0 / 3.0}, std::pair{0.06, 0.55}}) {
      std::vector<std::pair<double, double>> pts;
      for (double x : grid) pts.push_back({x, a * std::pow(x, b)});
      const PowerLawFit f = fit_power_law(pts);
      CHECK(f.prefactor == doctest::Approx(a).epsilon(1e-10));
      CHECK(f.exponent == doctest::Approx(b).epsilon(1e-10));
      CHECK(f.residual < 1e-12);
      CHECK(f.n0_min == 100);
      CHECK(f.n0_max == 400);
    }
  }

  SUBCASE("guards") {
    std::vector<std::pair<double, double>> three = {{1, 1}, {2, 2}, {3, 3}};
    CHECK(thrown_code([&] { (void)fit_power_law(three); }) == errc::invalid_parameter);
    std::vector<std::pair<double, double>> bad = {{1, 1}, {2, 2}, {3, 3}, {4, -1}};
    CHECK(thrown_code([&] { (void)fit_power_law(bad); }) == errc::invalid_data);
    std::vector<std::pair<double, double>> flat = {{2, 1}, {2, 2}, {2, 3}, {2, 4}};
    CHECK(thrown_code([&] { (void)fit_power_law(flat); }) == errc::invalid_data);
  }
}

TEST_CASE("analytic thermal thresholds and their scaling") {
  // the closed-form route delegates to the undepleted-pump bisection
  const double th = nth_threshold(175, 1e-6, Backend::Analytic);
  CHECK(th == nth_max_ud(175, 1e-6));
  CHECK(th > 1.2);
  CHECK(th < 1.6);
  // bracket consistency of the returned root
  CHECK(epr_min_ud({175.0, th - 1e-3}) < 1.0);
  CHECK(epr_min_ud({175.0, th + 1e-3}) > 1.0);

  std::vector<std::pair<double, double>> pts;
  for (double n0 : {100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0})
    pts.push_back({n0, nth_threshold(n0, 1e-6, Backend::Analytic)});
  const PowerLawFit f = fit_power_law(pts);
  CHECK(f.exponent == doctest::Approx(0.6444).epsilon(0.02));
  CHECK(f.prefactor == doctest::Approx(0.0494).epsilon(0.06));
  CHECK(f.residual < 0.02);
}

TEST_CASE("exact tau sweeps reproduce the entanglement window") {
  SweepOptions so;
  const auto grid = default_tau_grid(0.012, 120);

  for (double n0 : {150.0, 175.0, 200.0}) {
    const SweepResult sr = sweep_tau(matched_vacuum(n0), grid, Backend::Exact, so);
    CHECK(sr.axis == SweepAxis::Tau);
    CHECK(sr.backend == Backend::Exact);
    CHECK(sr.trajectories == 0);
    REQUIRE(sr.points.size() == grid.size());
    double ups_tp = -1;
    for (std::size_t i = 0; i < sr.points.size(); ++i) {
      CHECK(sr.points[i].x == grid[i]);
      CHECK(sr.points[i].report.tau == grid[i]);
      if (sr.points[i].x == kMeasurementTau) ups_tp = sr.points[i].report.upsilon;
    }
    CHECK(ups_tp >= 0.0);
    CHECK(ups_tp <= 0.10);  // strong suppression at the reference time
    if (n0 == 175.0) CHECK(ups_tp == doctest::Approx(0.0557429747123298).epsilon(1e-4));
  }

}

TEST_CASE("phase mismatch slows the growth everywhere") {
  SweepOptions so;
  const auto grid = default_tau_grid(0.012, 120);
  const SweepResult matched = sweep_tau(matched_vacuum(175), grid, Backend::Exact, so);
  ModelParams detuned = matched_vacuum(175);
  detuned.q_over_g = 0.0;
  const SweepResult off = sweep_tau(detuned, grid, Backend::Exact, so);
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(off.points[i].report.n_signal < matched.points[i].report.n_signal);
}

TEST_CASE("tau sweep edge cases") {
  SweepOptions so;
  const SweepResult sr = sweep_tau(matched_vacuum(175), {}, Backend::Exact, so);
  CHECK(sr.points.empty());
  CHECK(sr.backend == Backend::Exact);

  ModelParams coherent = matched_vacuum(175);
  coherent.seed.kind = SeedKind::Coherent;
  coherent.seed.alpha_seed_sq = 1.0;
  CHECK(thrown_code([&] {
          (void)sweep_tau(coherent, default_tau_grid(0.002, 3), Backend::Analytic, so);
        }) == errc::unsupported_configuration);
  ModelParams thermal = matched_vacuum(175);
  thermal.seed.kind = SeedKind::Thermal;
  thermal.seed.nbar_th = 1.0;
  CHECK(thrown_code([&] {
          (void)sweep_tau(thermal, default_tau_grid(0.002, 3), Backend::Exact, so);
        }) == errc::unsupported_configuration);
  CHECK(thrown_code([&] { (void)sweep_tau(matched_vacuum(175), {0.002, 0.001},
                                          Backend::Exact, so); }) ==
        errc::invalid_parameter);
  CHECK(thrown_code([&] { (void)sweep_tau(matched_vacuum(175), {-0.001, 0.002},
                                          Backend::Exact, so); }) ==
        errc::invalid_parameter);
}

TEST_CASE("seed sweeps reduce to time-optimized tau sweeps") {
  SweepOptions so;
  so.trajectories = 2000;
  so.tau_points = 100;
  so.rng_seed = 9;

  const SweepResult seeded =
      sweep_seed(175, {0.0}, Backend::Wigner, SeedKind::Thermal, so);
  REQUIRE(seeded.points.size() == 1);
  CHECK(seeded.axis == SweepAxis::NbarTh);
  CHECK(seeded.points[0].x == 0.0);

  const auto grid = default_tau_grid(so.tau_max, so.tau_points);
  const SweepResult plain = sweep_tau(matched_vacuum(175), grid, Backend::Wigner, so);
  std::vector<EntanglementReport> reports;
  for (const auto& p : plain.points) reports.push_back(p.report);
  const EntanglementReport epr = optimize_time(reports, PhaseObjective::EPR);
  const EntanglementReport xmin = optimize_time(reports, PhaseObjective::TwoModeMinus);

  // same substreams, same grid: the reduction must be bit-identical
  CHECK(seeded.points[0].report.upsilon == epr.upsilon);
  CHECK(seeded.points[0].report.tau == epr.tau);
  CHECK(seeded.points[0].report.theta0 == epr.theta0);
  CHECK(seeded.points[0].report.var_xminus_min == xmin.var_xminus_min);

  SUBCASE("guards") {
    CHECK(thrown_code([&] {
            (void)sweep_seed(175, {}, Backend::Wigner, SeedKind::Thermal, so);
          }) == errc::invalid_parameter);
    CHECK(thrown_code([&] {
            (void)sweep_seed(175, {1.0, 0.5}, Backend::Wigner, SeedKind::Thermal, so);
          }) == errc::invalid_parameter);
    CHECK(thrown_code([&] {
            (void)sweep_seed(175, {-0.5, 1.0}, Backend::Wigner, SeedKind::Thermal, so);
          }) == errc::invalid_parameter);
    CHECK(thrown_code([&] {
            (void)sweep_seed(175, {0.5}, Backend::Exact, SeedKind::Thermal, so);
          }) == errc::unsupported_configuration);
  }
}

TEST_CASE("stochastic threshold search brackets the EPR boundary") {
  SweepOptions so;
  so.trajectories = 4000;
  so.tau_points = 150;
  so.rng_seed = 3;
  const double tol = 0.05;
  const double th = nth_threshold(175, tol, Backend::Wigner, so);
  CHECK(th > 0.8);
  CHECK(th < 1.25);

  // common random numbers make the bracket reproducible after the fact
  auto ups_min = [&](double nbar) {
    const auto sr = sweep_seed(175, {nbar}, Backend::Wigner, SeedKind::Thermal, so);
    return sr.points[0].report.upsilon;
  };
  CHECK(ups_min(th - tol) < 1.0);
  CHECK(ups_min(th + tol) > 1.0);

  CHECK(thrown_code([&] { (void)nth_threshold(175, 0.0, Backend::Wigner, so); }) ==
        errc::invalid_parameter);
  CHECK(thrown_code([&] { (void)nth_threshold(175, 0.05, Backend::Exact, so); }) ==
        errc::unsupported_configuration);
}

TEST_CASE("figure ids round-trip") {
  for (const char* name :
       {"F1a", "F1b", "F2a", "F2b", "F2c", "F2d", "F3a", "F3b", "F3c", "F4a", "F4b"})
    CHECK(std::string(figure_id_name(parse_figure_id(name))) == name);
  CHECK(thrown_code([] { (void)parse_figure_id("F9z"); }) == errc::invalid_parameter);
}

TEST_CASE("figure datasets: curves, references, manifest") {
  FigureOptions fo;
  fo.out_dir = fresh_dir("spinepr_scans_fig");
  fo.n0_list = {150, 175};
  fo.tau_points = 40;

  SUBCASE("population panel carries the detuned comparison curve") {
    auto files = figure_dataset(FigureId::F1a, fo);
    REQUIRE(files.size() == 3);  // two CSVs + manifest
    const Table t150 = parse_csv(slurp(files[0]));
    CHECK(t150.headers ==
          std::vector<std::string>{"tau[dimensionless]", "frac_pop[dimensionless]"});
    const Table t175 = parse_csv(slurp(files[1]));
    REQUIRE(t175.headers.size() == 3);
    CHECK(t175.headers[2] == "frac_pop_q0[dimensionless]");
    REQUIRE(!t175.cols[0].empty());
    for (std::size_t r = 1; r < t175.cols[0].size(); ++r)
      CHECK(t175.cols[2][r] < t175.cols[1][r]);

    const auto manifest = nlohmann::json::parse(slurp(files[2]));
    CHECK(manifest.at("figure") == "F1a");
    CHECK(manifest.at("backend") == "exact");
    CHECK(manifest.at("files").size() == 2);
    CHECK(!manifest.at("code_version").get<std::string>().empty());
  }

  SUBCASE("analytic reference columns are pure transcriptions") {
    fo.n0_list = {175};
    auto files = figure_dataset(FigureId::F2a, fo);
    REQUIRE(files.size() == 2);
    const Table t = parse_csv(slurp(files[0]));
    REQUIRE(t.headers.size() == 4);
    CHECK(t.headers[3] == "ud_upsilon[dimensionless]");
    UndepletedParams u;
    u.n0 = 175;
    for (std::size_t r = 0; r < t.cols[0].size(); ++r) {
      const double ref = epr_ud(u, t.cols[0][r]);
      CHECK(std::abs(t.cols[3][r] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
    // the reference measurement time is an exact grid row
    bool has_tp = false;
    for (double x : t.cols[0]) has_tp |= (x == kMeasurementTau);
    CHECK(has_tp);
  }
}

TEST_CASE("figure datasets are byte-deterministic") {
  FigureOptions fo;
  fo.n0_list = {175};
  fo.nbar_list = {1};
  fo.trajectories = 1500;
  fo.theta_points = 21;

  fo.out_dir = fresh_dir("spinepr_scans_det1");
  const auto first = figure_dataset(FigureId::F3a, fo);
  fo.out_dir = fresh_dir("spinepr_scans_det2");
  const auto second = figure_dataset(FigureId::F3a, fo);
  REQUIRE(first.size() == second.size());
  REQUIRE(first.size() == 4);  // vacuum, thermal, coherent CSVs + manifest
  for (std::size_t i = 0; i < first.size(); ++i)
    CHECK(slurp(first[i]) == slurp(second[i]));

  // the stochastic curves carry error columns; the exact one does not
  const Table vac = parse_csv(slurp(first[0]));
  CHECK(vac.headers == std::vector<std::string>{"theta_rel[rad]",
                                                "var_xminus[dimensionless]",
                                                "var_xplus[dimensionless]"});
  const Table th = parse_csv(slurp(first[1]));
  REQUIRE(th.headers.size() == 5);
  CHECK(th.headers[2] == "var_xminus_err(nbar=1)[dimensionless]");
  for (double e : th.cols[2]) CHECK(e > 0.0);
  // the squeezed dip sits at the centre of the scan window, mirrored by
  // strong antisqueezing in the conjugate quadrature
  const std::size_t mid = vac.cols[0].size() / 2;
  CHECK(vac.cols[1][mid] < 1.0);
  CHECK(vac.cols[2][mid] > 2.0 * vac.cols[1][mid]);
}

TEST_CASE("csv writer basics") {
  std::ostringstream os;
  write_csv(os, {{"a[x]", {1.0, 0.5}}, {"b[y]", {2.0, -0.25}}});
  CHECK(os.str() == "a[x],b[y]\n1,2\n0.5,-0.25\n");

  CHECK(thrown_code([] {
          std::ostringstream s;
          write_csv(s, {{"a", {1.0}}, {"b", {}}});
        }) == errc::invalid_parameter);
  CHECK(thrown_code([] {
          std::ostringstream s;
          write_csv(s, {{"bad,header", {1.0}}});
        }) == errc::invalid_parameter);

  for (double x : {0.1, 3.141592653589793, 1e-300, -17.25}) {
    const std::string s = format_g17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_SUITE_END();
