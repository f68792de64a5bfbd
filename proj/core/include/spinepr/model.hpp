#pragma once

#include <complex>
#include <string>
#include <vector>

#include "spinepr/errors.hpp"

namespace spinepr {

using cplx = std::complex<double>;

// Three-mode spin-changing-collision model, dimensionless convention:
// time is tau = g*t, energies in units of hbar*g.
//
//   H/hbar = g (a0^+ a0^+ a-1 a+1 + h.c.) + g a0^+ a0 (n+1 + n-1)
//            - p (n+1 - n-1) - q (n+1 + n-1)
//
// The pump mode is m=0; signal/idler are m=+1/-1 and are only ever populated
// in pairs by the first term.  "Phase matched" means q/g = N0, which makes
// pair production resonant at short times.

enum class SeedKind { Vacuum, Thermal, Coherent };

inline const char* seed_kind_name(SeedKind k) {
  switch (k) {
    case SeedKind::Vacuum: return "vacuum";
    case SeedKind::Thermal: return "thermal";
    case SeedKind::Coherent: return "coherent";
  }
  return "?";
}

struct SeedSpec {
  SeedKind kind = SeedKind::Vacuum;
  double nbar_th = 0.0;        // mean thermal occupation per signal/idler mode
  double alpha_seed_sq = 0.0;  // coherent |alpha_{+-1}(0)|^2; seed phase = pump phase

  void validate() const {
    require(nbar_th >= 0.0, errc::invalid_parameter, "nbar_th must be >= 0");
    require(alpha_seed_sq >= 0.0, errc::invalid_parameter, "alpha_seed_sq must be >= 0");
    if (kind != SeedKind::Thermal)
      require(nbar_th == 0.0, errc::invalid_parameter, "nbar_th only valid for thermal seeds");
    if (kind != SeedKind::Coherent)
      require(alpha_seed_sq == 0.0, errc::invalid_parameter,
              "alpha_seed_sq only valid for coherent seeds");
  }
};

struct ModelParams {
  double n0_mean = 175.0;  // initial mean pump atom number N0
  double q_over_g = 175.0; // quadratic Zeeman + dressing shift, units of g
  double p_over_g = 0.0;   // linear Zeeman; kept for completeness, must be 0
  SeedSpec seed{};

  void validate_for_run() const {
    require(n0_mean > 0.0, errc::invalid_parameter, "n0_mean must be > 0 for evolution");
    // the linear Zeeman term only rotates the (empty-pair-difference) sector we
    // never leave; nonzero values are untested physics, so reject rather than
    // silently accept
    require(p_over_g == 0.0, errc::unsupported_configuration, "p_over_g must be 0");
    seed.validate();
  }
};

// q/g on resonance ("phase matched"): pair production sees no net detuning.
inline double phase_matched_q(double n0_mean) {
  require(n0_mean > 0.0, errc::invalid_parameter, "phase_matched_q: n0_mean must be > 0");
  return n0_mean;
}

// r = N0 * tau; r ~ 2 at the measurement settings used throughout.
inline double squeezing_parameter(double n0_mean, double tau) {
  require(tau >= 0.0, errc::invalid_parameter, "squeezing_parameter: tau must be >= 0");
  return n0_mean * tau;
}

// Pump-depletion measurement time used by all headline results.
inline constexpr double kMeasurementTau = 0.0073;

// Canonical normally-ordered, equal-time moment contract shared by every
// backend.  One orientation of each Hermitian pair is stored; the conjugate
// orientation is exposed through entries() below.  Statistical errors are zero
// for exact backends.
//
// Naming: p/m = modes +1/-1, 0 = pump.   f = <a_j^+ a_0> transfer moments,
// s = <a_j^+2 a_0^2> single-mode pair moments, M = <a_+^+ a_-^+ a_0^2> the
// two-mode pair moment, g = <n_j n_0> cross densities.
struct MomentErrors {
  double a0 = 0, ap = 0, am = 0;
  double n0 = 0, np = 0, nm = 0;
  double fp = 0, fm = 0, pm = 0;
  double a00 = 0, app = 0, amm = 0, a0p = 0, a0m = 0, apam = 0;
  double q0 = 0, gp = 0, gm = 0, npnm = 0;
  double sp = 0, sm = 0, M = 0, T = 0;
};

struct MomentSet {
  // first moments
  cplx a0{}, ap{}, am{};
  // second moments <a_i^+ a_j> (diagonal ones are real by construction) ...
  double n0 = 0, np = 0, nm = 0;
  cplx fp{}, fm{};  // <a_p^+ a_0>, <a_m^+ a_0>
  cplx pm{};        // <a_p^+ a_m>
  // ... and <a_i a_j>
  cplx a00{}, app{}, amm{};   // <a_0^2>, <a_p^2>, <a_m^2>
  cplx a0p{}, a0m{}, apam{};  // <a_0 a_p>, <a_0 a_m>, <a_p a_m>
  // fourth moments entering the quadrature algebra
  double q0 = 0;    // <a_0^+2 a_0^2>
  double gp = 0;    // <a_p^+ a_p a_0^+ a_0>
  double gm = 0;    // <a_m^+ a_m a_0^+ a_0>
  double npnm = 0;  // <a_p^+ a_p a_m^+ a_m>
  cplx sp{}, sm{};  // <a_p^+2 a_0^2>, <a_m^+2 a_0^2>
  cplx M{};         // <a_p^+ a_m^+ a_0^2>
  // <a_p^+ a_m a_0^+ a_0>: second contraction of the equal-time cross
  // covariance; vanishes for unpolarized seeds but not for coherent ones
  cplx T{};

  MomentErrors err{};
  std::vector<std::string> warnings{};

  struct Entry {
    const char* name;
    cplx value;
    double stderr_;
    int delta_m;  // change of n_{+1} - n_{-1} effected by the operator string
  };

  // flattened view for generic property tests (selection rules, symmetry)
  std::vector<Entry> entries() const {
    return {
        {"a0", a0, err.a0, 0},       {"ap", ap, err.ap, +1},     {"am", am, err.am, -1},
        {"n0", n0, err.n0, 0},       {"np", np, err.np, 0},      {"nm", nm, err.nm, 0},
        {"fp", fp, err.fp, +1},      {"fm", fm, err.fm, -1},     {"pm", pm, err.pm, +2},
        {"a00", a00, err.a00, 0},    {"app", app, err.app, +2},  {"amm", amm, err.amm, -2},
        {"a0p", a0p, err.a0p, +1},   {"a0m", a0m, err.a0m, -1},  {"apam", apam, err.apam, 0},
        {"q0", q0, err.q0, 0},       {"gp", gp, err.gp, 0},      {"gm", gm, err.gm, 0},
        {"npnm", npnm, err.npnm, 0}, {"sp", sp, err.sp, +2},     {"sm", sm, err.sm, -2},
        {"M", M, err.M, 0},          {"T", T, err.T, +2},
    };
  }

  // swap the +1 and -1 mode labels (signal/idler relabeling)
  MomentSet relabeled() const {
    MomentSet r = *this;
    std::swap(r.ap, r.am);
    std::swap(r.np, r.nm);
    std::swap(r.fp, r.fm);
    std::swap(r.app, r.amm);
    std::swap(r.a0p, r.a0m);
    std::swap(r.gp, r.gm);
    std::swap(r.sp, r.sm);
    r.pm = std::conj(pm);
    r.T = std::conj(T);
    std::swap(r.err.ap, r.err.am);
    std::swap(r.err.np, r.err.nm);
    std::swap(r.err.fp, r.err.fm);
    std::swap(r.err.app, r.err.amm);
    std::swap(r.err.a0p, r.err.a0m);
    std::swap(r.err.gp, r.err.gm);
    std::swap(r.err.sp, r.err.sm);
    return r;
  }
};

}
