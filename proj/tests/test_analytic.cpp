#include <doctest.h>

#include <cmath>
#include <complex>

#include "spinepr/analytic.hpp"

using namespace spinepr;

TEST_SUITE_BEGIN("analytic");

namespace {

struct RefCase {
  double n0, nbar, tau;
  double pop, anom_im, ups, xm, insep, tau_min, ups_min;
};

// High-precision reference evaluations of the closed forms (50-digit working
// precision, rounded to 17 significant digits), used to pin the transcription.
const RefCase refs[] = {
    {175, 0, 0.0073, 2.7372479723973619, -3.1984018563637107, 0.047502725612830171,
     0.15538446413460474, 0.011999734454967773, 0.0082067003782930947, 0.044882304369966492},
    {175, 1, 0.0073, 9.2117439171920856, -9.5952055690911320, 0.55152799516399072,
     0.46615339240381422, 0.011999734454967773, 0.0079009535230726396, 0.55735842420786788},
    {175, 2, 0.0073, 15.686239861986809, -15.992009281818553, 1.8546841203270023,
     0.77692232067302369, 0.011999734454967773, 0.0075997347673995420, 2.1697687549792354},
    {150, 0, 0.0073, 1.7617824658290195, -2.2058240915203550, 0.071690995662229758,
     0.22383349723465774, 0.024740829480324849, 0.0093014199024451761, 0.052196685642335205},
    {200, 0, 0.0073, 4.1488052867618066, -4.6218384431116286, 0.037334981182308886,
     0.10786737460071203, 0.0058008116035683992, 0.0073574468766792173, 0.039365002555065687},
    {100, 0, 0.004, 0.16871747315242231, -0.44405299109381151, 0.56635605494579487,
     0.89865792823444317, 0.33596322973215103, 0.012863487664244251, 0.077416197855281919},
    {400, 0.5, 0.002, 2.0774644711948852, -2.3755679532002298, 0.64228326520818731,
     0.80758607197862161, 0.078331445593528712, 0.0040877639272971479, 0.088726096320743622},
};

}  // namespace

TEST_CASE("closed forms against high-precision references") {
  for (const auto& r : refs) {
    const UndepletedParams p{r.n0, r.nbar};
    CAPTURE(r.n0);
    CAPTURE(r.nbar);
    CAPTURE(r.tau);
    CHECK(population_ud(p, r.tau) == doctest::Approx(r.pop).epsilon(1e-13));
    const cplx an = anomalous_ud(p, r.tau);
    CHECK(an.real() == 0.0);
    CHECK(an.imag() == doctest::Approx(r.anom_im).epsilon(1e-13));
    CHECK(epr_ud(p, r.tau) == doctest::Approx(r.ups).epsilon(1e-13));
    CHECK(two_mode_var_ud(p, r.tau) == doctest::Approx(r.xm).epsilon(1e-13));
    CHECK(insep_ud(p, r.tau) == doctest::Approx(r.insep).epsilon(1e-13));
    CHECK(tau_min_ud(p) == doctest::Approx(r.tau_min).epsilon(1e-13));
    CHECK(epr_min_ud(p) == doctest::Approx(r.ups_min).epsilon(1e-13));
  }
}

TEST_CASE("limits at tau = 0") {
  for (double nbar : {0.0, 0.7}) {
    const UndepletedParams p{175.0, nbar};
    CHECK(population_ud(p, 0.0) == nbar);
    CHECK(anomalous_ud(p, 0.0) == cplx(0.0, 0.0));
    CHECK(two_mode_var_ud(p, 0.0) == 2.0 * (1.0 + 2.0 * nbar));
    CHECK(insep_ud(p, 0.0) == 1.0);
  }
  CHECK(epr_ud({175.0, 0.0}, 0.0) == 1.0);  // vacuum saturates the bound exactly
}

TEST_CASE("inseparability decays monotonically") {
  const UndepletedParams p{175.0, 0.0};
  double prev = 1.0;
  for (double tau = 5e-4; tau < 0.01; tau += 5e-4) {
    const double v = insep_ud(p, tau);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
}

TEST_CASE("optimum-time forms are self-consistent up to their truncation order") {
  // epr_ud carries 1/N0 corrections in a different arrangement than the
  // optimum-time pair, so the mismatch is O(1/sqrt(N0)): a few percent at
  // N0 ~ 200 and vanishing as N0 grows.  Pin both the bound and the decay.
  auto gap = [](double n0) {
    const UndepletedParams p{n0, 0.0};
    const double at_min = epr_ud(p, tau_min_ud(p));
    return std::abs(at_min / epr_min_ud(p) - 1.0);
  };
  CHECK(gap(175.0) < 0.10);
  CHECK(gap(10000.0) < gap(175.0) / 4.0);
  // and tau_min is genuinely near the minimum of epr_ud itself
  const UndepletedParams p{175.0, 0.0};
  const double tm = tau_min_ud(p);
  const double at_min = epr_ud(p, tm);
  CHECK(at_min < epr_ud(p, 0.8 * tm));
  CHECK(at_min < epr_ud(p, 1.25 * tm));
}

TEST_CASE("domain guards") {
  // vacuum EPR formulas need n0 > (1 + 2 nbar)^2
  try {
    epr_min_ud({1.0, 0.0});
    FAIL("expected formula_breakdown");
  } catch (const Error& e) {
    CHECK(e.code() == errc::formula_breakdown);
  }
  CHECK_THROWS_AS(tau_min_ud({8.0, 1.0}), Error);  // (1+2)^2 = 9 > 8
  CHECK_THROWS_AS(epr_ud({175.0, 0.0}, -1e-6), Error);
  CHECK_THROWS_AS(population_ud({-5.0, 0.0}, 0.001), Error);

  // far outside the validity regime the EPR denominator crosses zero
  try {
    epr_ud({175.0, 0.0}, 0.05);
    FAIL("expected formula_breakdown");
  } catch (const Error& e) {
    CHECK(e.code() == errc::formula_breakdown);
  }
}

TEST_CASE("thermal tolerance threshold") {
  CHECK_THROWS_AS(nth_max_ud(175.0, 0.0), Error);  // tol must be positive
  const double root = nth_max_ud(175.0, 1e-10);
  CHECK(root > 1.2);
  CHECK(root < 1.6);
  // it is a genuine root of epr_min_ud = 1
  CHECK(epr_min_ud({175.0, root}) == doctest::Approx(1.0).epsilon(1e-6));
  // monotonicity in n0: larger condensates tolerate more thermal noise
  CHECK(nth_max_ud(400.0, 1e-10) > root);
  CHECK(nth_max_ud(100.0, 1e-10) < root);
}

TEST_CASE("undepleted moment table obeys the model's selection rules") {
  const UndepletedParams p{175.0, 0.3};
  const MomentSet m = moments_ud(p, 0.005);

  for (const auto& e : m.entries())
    if (e.delta_m != 0) CHECK(std::abs(e.value) == 0.0);

  CHECK(m.np == m.nm);
  CHECK(m.gp == m.gm);
  CHECK(m.np == doctest::Approx(population_ud(p, 0.005)).epsilon(1e-14));
  CHECK(m.apam == anomalous_ud(p, 0.005));
  // frozen pump: factorized pump moments
  CHECK(m.n0 == 175.0);
  CHECK(m.q0 == 175.0 * 175.0);
  CHECK(m.a00.real() == doctest::Approx(175.0).epsilon(1e-14));
  CHECK(m.M == std::conj(m.apam) * 175.0);
  // gaussian fourth moment: <np nm> = n^2 + |<ap am>|^2
  CHECK(m.npnm == doctest::Approx(m.np * m.nm + std::norm(m.apam)).epsilon(1e-14));

  // at tau = 0 a thermal seed is uncorrelated
  const MomentSet m0 = moments_ud(p, 0.0);
  CHECK(m0.np == 0.3);
  CHECK(m0.apam == cplx(0.0, 0.0));
  CHECK(m0.npnm == doctest::Approx(0.09).epsilon(1e-14));
}

TEST_SUITE_END();
