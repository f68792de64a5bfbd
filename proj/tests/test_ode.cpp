#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "spinepr/errors.hpp"
#include "spinepr/ode.hpp"

using spinepr::OdeOptions;
using spinepr::integrate_grid;

TEST_SUITE_BEGIN("ode");

TEST_CASE("exponential decay reaches rtol-level accuracy") {
  auto rhs = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return -y; };
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  const double grid[] = {0.5, 1.0, 2.0};
  std::vector<double> out(3);
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-14;
  auto stats = integrate_grid(rhs, y0, 0.0, grid, 3, [&](std::size_t i, const Eigen::VectorXd& y) {
    out[i] = y[0];
  }, opt);
  CHECK(stats.steps > 0);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(out[i] - std::exp(-grid[i])) < 5e-10);
}

TEST_CASE("tighter tolerance buys accuracy on the harmonic oscillator") {
  auto rhs = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    Eigen::VectorXd d(2);
    d << y[1], -y[0];
    return d;
  };
  Eigen::VectorXd y0(2);
  y0 << 1.0, 0.0;
  const double grid[] = {25.0};
  auto run = [&](double rtol) {
    double err = 0;
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = rtol * 1e-3;
    integrate_grid(rhs, y0, 0.0, grid, 1, [&](std::size_t, const Eigen::VectorXd& y) {
      err = std::hypot(y[0] - std::cos(25.0), y[1] + std::sin(25.0));
    }, opt);
    return err;
  };
  const double coarse = run(1e-5);
  const double fine = run(1e-10);
  CHECK(fine < 1e-8);
  CHECK(coarse / fine > 50.0);  // ~5 orders of tolerance should buy >> 50x
}

TEST_CASE("complex phase rotation preserves modulus") {
  using Vc = Eigen::VectorXcd;
  const std::complex<double> iw(0.0, 2.0);
  auto rhs = [&](double, const Vc& y) -> Vc { return iw * y; };
  Vc y0(1);
  y0[0] = {1.0, 0.5};
  const double grid[] = {1.0, 3.0, 7.0};
  std::vector<std::complex<double>> out(3);
  integrate_grid(rhs, y0, 0.0, grid, 3, [&](std::size_t i, const Vc& y) { out[i] = y[0]; });
  for (int i = 0; i < 3; ++i) {
    const auto expect = y0[0] * std::exp(iw * grid[i]);
    CHECK(std::abs(out[i] - expect) < 1e-8);
    CHECK(std::abs(std::abs(out[i]) - std::abs(y0[0])) < 1e-9);
  }
}

TEST_CASE("output lands exactly on the requested grid") {
  // the sink index sequence must be 0..n-1 exactly once, including a grid
  // point at t0 itself, and values at duplicate grid times must coincide
  auto rhs = [](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    Eigen::VectorXd d(1);
    d << std::sin(t) * y[0];
    return d;
  };
  Eigen::VectorXd y0(1);
  y0 << 2.0;
  const double grid[] = {0.0, 0.3, 0.3, 1.1};
  std::vector<std::size_t> seen;
  std::vector<double> vals;
  integrate_grid(rhs, y0, 0.0, grid, 4, [&](std::size_t i, const Eigen::VectorXd& y) {
    seen.push_back(i);
    vals.push_back(y[0]);
  });
  REQUIRE(seen.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(seen[i] == i);
  CHECK(vals[0] == 2.0);
  CHECK(vals[1] == vals[2]);
  // y(t) = y0 exp(1 - cos t)
  CHECK(std::abs(vals[3] - 2.0 * std::exp(1.0 - std::cos(1.1))) < 1e-8);
}

TEST_CASE("step budget violation raises a numerical failure") {
  auto rhs = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return -y; };
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  const double grid[] = {1000.0};
  OdeOptions opt;
  opt.max_steps = 3;
  opt.max_step = 1e-3;  // force many steps
  try {
    integrate_grid(rhs, y0, 0.0, grid, 1, [](std::size_t, const Eigen::VectorXd&) {}, opt);
    FAIL("expected a numerical_failure error");
  } catch (const spinepr::Error& e) {
    CHECK(e.code() == spinepr::errc::numerical_failure);
  }
}

TEST_SUITE_END();
