#include "spinepr/dense.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "spinepr/ode.hpp"

namespace spinepr {

namespace {

using Vec = Eigen::VectorXcd;

// Three bosonic modes (pump, +1, -1) with a uniform cutoff: occupation
// 0..nc-1 each, index = (n0*nc + n1)*nc + n2.  All operator applications are
// matrix-free; creation out of the top Fock level truncates, matching the
// finite-matrix convention.
struct Fock3 {
  int nc;
  long dim() const { return long(nc) * nc * nc; }
  int stride(int mode) const { return mode == 0 ? nc * nc : (mode == 1 ? nc : 1); }

  Vec annihilate(int mode, const Vec& psi) const {
    Vec out = Vec::Zero(psi.size());
    const int s = stride(mode);
    for (long i = 0; i < psi.size(); ++i) {
      const int n = int(i / s) % nc;
      if (n > 0) out[i - s] += std::sqrt(double(n)) * psi[i];
    }
    return out;
  }
  Vec create(int mode, const Vec& psi) const {
    Vec out = Vec::Zero(psi.size());
    const int s = stride(mode);
    for (long i = 0; i < psi.size(); ++i) {
      const int n = int(i / s) % nc;
      if (n < nc - 1) out[i + s] += std::sqrt(double(n) + 1.0) * psi[i];
    }
    return out;
  }

  // H psi in units of hbar*g (dimensionless tau convention)
  Vec apply_h(const ModelParams& p, const Vec& psi) const {
    Vec out(psi.size());
    const int s0 = nc * nc, s1 = nc, s2 = 1;
    for (long i = 0; i < psi.size(); ++i) {
      const int n0 = int(i / s0), n1 = int(i / s1) % nc, n2 = int(i) % nc;
      const double diag =
          double(n0) * (n1 + n2) - p.p_over_g * (n1 - n2) - p.q_over_g * (n1 + n2);
      out[i] = diag * psi[i];
    }
    for (long i = 0; i < psi.size(); ++i) {
      const int n0 = int(i / s0), n1 = int(i / s1) % nc, n2 = int(i) % nc;
      // pair term: |n0,n1,n2> -> sqrt((n0+1)(n0+2) n1 n2) |n0+2,n1-1,n2-1>
      // and its Hermitian partner on the mirrored pair of indices
      if (n0 + 2 <= nc - 1 && n1 >= 1 && n2 >= 1) {
        const long j = i + 2 * s0 - s1 - s2;
        const double amp = std::sqrt(double(n0 + 1) * (n0 + 2) * double(n1) * double(n2));
        out[j] += amp * psi[i];
        out[i] += amp * psi[j];
      }
    }
    return out;
  }
};

// one Lanczos step of the Krylov exponential: psi <- exp(-i H dt) psi
// Returns the propagated vector; err_out reports the standard a-posteriori
// magnitude of the first neglected Krylov contribution.
Vec krylov_exp_step(const Fock3& f, const ModelParams& p, const Vec& psi, double dt, int m,
                    double& err_out) {
  const double nrm = psi.norm();
  if (nrm == 0.0) {
    err_out = 0.0;
    return psi;
  }
  std::vector<Vec> v;
  v.reserve(m);
  v.push_back(psi / nrm);
  Eigen::VectorXd alpha(m), beta(m);  // beta[j] couples v[j] -> v[j+1]
  int built = 0;
  for (int j = 0; j < m; ++j) {
    Vec w = f.apply_h(p, v[j]);
    const double a = std::real(v[j].dot(w));
    alpha[j] = a;
    w -= a * v[j];
    if (j > 0) w -= beta[j - 1] * v[j - 1];
    // full reorthogonalization; basis sizes here are tiny
    for (int r = 0; r < 2; ++r)
      for (int q = 0; q <= j; ++q) w -= v[q].dot(w) * v[q];
    const double b = w.norm();
    built = j + 1;
    if (b < 1e-14) {  // happy breakdown: Krylov space is invariant
      beta[j] = 0.0;
      break;
    }
    beta[j] = b;
    if (j + 1 < m) v.push_back(w / b);
  }
  if (built == 1) {
    err_out = 0.0;
    return std::polar(1.0, -alpha[0] * dt) * psi;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(alpha.head(built), beta.head(built - 1), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) fail(errc::numerical_failure, "Krylov eigensolve failed");
  const Eigen::MatrixXd& u = es.eigenvectors();
  Eigen::VectorXcd phases(built);
  for (int j = 0; j < built; ++j) phases[j] = std::polar(1.0, -es.eigenvalues()[j] * dt);
  const Eigen::VectorXcd small =
      u.cast<cplx>() * phases.cwiseProduct(u.row(0).transpose().cast<cplx>()).eval();
  Vec out = Vec::Zero(psi.size());
  for (int j = 0; j < built; ++j) out += small[j] * v[j];
  err_out = (built < m) ? 0.0 : std::abs(beta[built - 1] * std::abs(small[built - 1])) * dt;
  return out * nrm;
}

Vec evolve_krylov(const Fock3& f, const ModelParams& p, Vec psi, double tau) {
  if (tau == 0.0) return psi;
  const int m = 40;
  int nstep = 1;
  // crude spectral-radius estimate from the Gershgorin row of the largest
  // occupation corner sets the initial substep count
  const double hscale =
      3.0 * double(f.nc) * f.nc + std::abs(p.q_over_g) * 2.0 * f.nc + 1.0;
  nstep = std::max(1, int(tau * hscale / 15.0));
  for (;;) {
    Vec cur = psi;
    double worst = 0.0;
    const double dt = tau / nstep;
    for (int s = 0; s < nstep; ++s) {
      double err;
      cur = krylov_exp_step(f, p, cur, dt, m, err);
      worst = std::max(worst, err);
    }
    if (worst < 1e-12) return cur;
    nstep *= 2;
    require(nstep < 100000, errc::numerical_failure, "Krylov propagation failed to converge");
  }
}

Vec evolve_rk(const Fock3& f, const ModelParams& p, Vec psi, double tau) {
  if (tau == 0.0) return psi;
  auto rhs = [&](double, const Vec& y) -> Vec {
    return cplx(0.0, -1.0) * f.apply_h(p, y);
  };
  const double grid[] = {tau};
  Vec out;
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  integrate_grid(rhs, std::move(psi), 0.0, grid, 1,
                 [&](std::size_t, const Vec& y) { out = y; }, opt);
  return out;
}

Vec coherent_vec(double alpha, int nc) {
  Eigen::VectorXcd v(nc);
  double logfact = 0.0;
  for (int n = 0; n < nc; ++n) {
    if (n > 0) logfact += std::log(double(n));
    v[n] = std::exp(-alpha * alpha / 2.0 + n * std::log(std::max(alpha, 1e-300)) -
                    0.5 * logfact);
  }
  if (alpha == 0.0) {
    v.setZero();
    v[0] = 1.0;
  }
  v /= v.norm();  // re-normalize the truncation tail away
  return v;
}

Vec number_vec(int n, int nc) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nc);
  v[n] = 1.0;
  return v;
}

Vec product_state(const Vec& m0, const Vec& m1, const Vec& m2) {
  const int nc = int(m0.size());
  Vec psi(long(nc) * nc * nc);
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b)
      for (int c = 0; c < nc; ++c) psi[(long(a) * nc + b) * nc + c] = m0[a] * m1[b] * m2[c];
  return psi;
}

// weighted pure-state decomposition of the initial density matrix
struct PureTerm {
  double weight;
  Vec psi;
};

std::vector<PureTerm> initial_terms(const ModelParams& p, int nc) {
  const Vec pump = coherent_vec(std::sqrt(p.n0_mean), nc);
  switch (p.seed.kind) {
    case SeedKind::Vacuum:
      return {{1.0, product_state(pump, number_vec(0, nc), number_vec(0, nc))}};
    case SeedKind::Coherent: {
      // seed phase equals the (real) pump phase
      const Vec s = coherent_vec(std::sqrt(p.seed.alpha_seed_sq), nc);
      return {{1.0, product_state(pump, s, s)}};
    }
    case SeedKind::Thermal: {
      const double nb = p.seed.nbar_th;
      if (nb == 0.0)
        return {{1.0, product_state(pump, number_vec(0, nc), number_vec(0, nc))}};
      // truncated Bose-Einstein ladder, renormalized
      const double r = nb / (1.0 + nb);
      int top = nc - 1;
      // drop negligible tail terms to keep the mixture small
      while (top > 0 && std::pow(r, top) / (1.0 + nb) < 1e-14) --top;
      std::vector<double> w(top + 1);
      double tot = 0.0;
      for (int n = 0; n <= top; ++n) tot += (w[n] = std::pow(r, n) / (1.0 + nb));
      std::vector<PureTerm> terms;
      terms.reserve((top + 1) * (top + 1));
      for (int i = 0; i <= top; ++i)
        for (int j = 0; j <= top; ++j)
          terms.push_back(
              {w[i] / tot * w[j] / tot, product_state(pump, number_vec(i, nc), number_vec(j, nc))});
      return terms;
    }
  }
  fail(errc::invalid_parameter, "unknown seed kind");
}

void accumulate_moments(const Fock3& f, const Vec& psi, double w, MomentSet& m) {
  const Vec a0 = f.annihilate(0, psi);
  const Vec ap = f.annihilate(1, psi);
  const Vec am = f.annihilate(2, psi);
  const Vec a00 = f.annihilate(0, a0);
  const Vec a0p = f.annihilate(1, a0);
  const Vec a0m = f.annihilate(2, a0);
  const Vec apm = f.annihilate(2, ap);

  m.a0 += w * psi.dot(a0);
  m.ap += w * psi.dot(ap);
  m.am += w * psi.dot(am);
  m.n0 += w * a0.squaredNorm();
  m.np += w * ap.squaredNorm();
  m.nm += w * am.squaredNorm();
  m.fp += w * ap.dot(a0);
  m.fm += w * am.dot(a0);
  m.pm += w * ap.dot(am);
  m.a00 += w * psi.dot(a00);
  m.app += w * psi.dot(f.annihilate(1, ap));
  m.amm += w * psi.dot(f.annihilate(2, am));
  m.a0p += w * psi.dot(a0p);
  m.a0m += w * psi.dot(a0m);
  m.apam += w * psi.dot(apm);
  m.q0 += w * a00.squaredNorm();
  m.gp += w * a0p.squaredNorm();
  m.gm += w * a0m.squaredNorm();
  m.npnm += w * apm.squaredNorm();
  m.sp += w * f.annihilate(1, ap).dot(a00);
  m.sm += w * f.annihilate(2, am).dot(a00);
  m.M += w * apm.dot(a00);
  m.T += w * a0p.dot(a0m);
}

}  // namespace

MomentSet dense_oracle(const ModelParams& params, double tau, int n_cut) {
  params.validate_for_run();
  require(tau >= 0.0, errc::invalid_parameter, "dense_oracle: tau must be >= 0");
  require(n_cut >= 2, errc::invalid_parameter, "dense_oracle: n_cut must be >= 2");
  const Fock3 f{n_cut};
  require(f.dim() <= kMaxDenseDim, errc::resource_limit,
          "dense_oracle: three-mode dimension exceeds the ceiling");

  MomentSet m;
  for (const auto& term : initial_terms(params, n_cut)) {
    const Vec pk = evolve_krylov(f, params, term.psi, tau);
    const Vec pr = evolve_rk(f, params, term.psi, tau);
    const double dmax = (pk - pr).cwiseAbs().maxCoeff();
    require(dmax < 1e-7, errc::numerical_failure,
            "dense_oracle: independent integrators disagree (" + std::to_string(dmax) + ")");
    accumulate_moments(f, pk, term.weight, m);
  }
  return m;
}

MomentSet dense_oracle_fock_pump(int n_pump, const ModelParams& params, double tau, int n_cut) {
  params.validate_for_run();
  require(params.seed.kind == SeedKind::Vacuum, errc::unsupported_configuration,
          "fock-pump variant supports vacuum seeds only");
  require(n_pump >= 0 && n_pump < n_cut, errc::invalid_parameter,
          "n_pump must fit inside the cutoff");
  const Fock3 f{n_cut};
  require(f.dim() <= kMaxDenseDim, errc::resource_limit,
          "dense_oracle: three-mode dimension exceeds the ceiling");
  const Vec psi0 = product_state(number_vec(n_pump, n_cut), number_vec(0, n_cut),
                                 number_vec(0, n_cut));
  const Vec pk = evolve_krylov(f, params, psi0, tau);
  const Vec pr = evolve_rk(f, params, psi0, tau);
  const double dmax = (pk - pr).cwiseAbs().maxCoeff();
  require(dmax < 1e-7, errc::numerical_failure,
          "dense_oracle: independent integrators disagree (" + std::to_string(dmax) + ")");
  MomentSet m;
  accumulate_moments(f, pk, 1.0, m);
  return m;
}

LiteralQuadratures dense_literal_quadratures(const ModelParams& params, double tau, int n_cut,
                                             int nv_cut, double theta) {
  params.validate_for_run();
  require(nv_cut >= 2, errc::invalid_parameter, "vacuum-port cutoff must be >= 2");
  const Fock3 f{n_cut};
  require(f.dim() * nv_cut <= kMaxDenseDim, errc::resource_limit,
          "literal quadratures: four-mode dimension exceeds the ceiling");

  // four-mode index = three-mode index * nv + nv_occ; the port never evolves
  const long dim4 = f.dim() * nv_cut;
  auto annihilate4 = [&](int mode, const Vec& psi) -> Vec {
    Vec out = Vec::Zero(dim4);
    if (mode < 3) {
      const long s = long(f.stride(mode)) * nv_cut;
      for (long i = 0; i < dim4; ++i) {
        const int n = int(i / s) % f.nc;
        if (n > 0) out[i - s] += std::sqrt(double(n)) * psi[i];
      }
    } else {
      for (long i = 0; i < dim4; ++i) {
        const int n = int(i % nv_cut);
        if (n > 0) out[i - 1] += std::sqrt(double(n)) * psi[i];
      }
    }
    return out;
  };
  auto create4 = [&](int mode, const Vec& psi) -> Vec {
    Vec out = Vec::Zero(dim4);
    if (mode < 3) {
      const long s = long(f.stride(mode)) * nv_cut;
      for (long i = 0; i < dim4; ++i) {
        const int n = int(i / s) % f.nc;
        if (n < f.nc - 1) out[i + s] += std::sqrt(double(n) + 1.0) * psi[i];
      }
    } else {
      for (long i = 0; i < dim4; ++i) {
        const int n = int(i % nv_cut);
        if (n < nv_cut - 1) out[i + 1] += std::sqrt(double(n) + 1.0) * psi[i];
      }
    }
    return out;
  };

  // evolve the physical three modes, then attach the idle port in vacuum
  std::vector<PureTerm> terms = initial_terms(params, n_cut);
  require(terms.size() == 1, errc::unsupported_configuration,
          "literal quadrature check handles pure initial states only");
  const Vec psi3 = evolve_krylov(f, params, terms[0].psi, tau);
  Vec psi = Vec::Zero(dim4);
  for (long i = 0; i < f.dim(); ++i) psi[i * nv_cut] = psi3[i];

  const cplx eip = std::polar(1.0, theta);
  auto b_apply = [&](int sign, const Vec& v) -> Vec {  // b_{+-} = (a0 +- av)/sqrt(2)
    return (annihilate4(0, v) + double(sign) * annihilate4(3, v)) / std::sqrt(2.0);
  };
  auto bdag_apply = [&](int sign, const Vec& v) -> Vec {
    return (create4(0, v) + double(sign) * create4(3, v)) / std::sqrt(2.0);
  };

  LiteralQuadratures out;
  for (int jm = 0; jm < 2; ++jm) {
    const int mode = jm == 0 ? 1 : 2;   // +1 maps to port b_+, -1 to b_-
    const int sign = jm == 0 ? +1 : -1;
    const double nb = std::real(psi.dot(bdag_apply(sign, b_apply(sign, psi))));
    auto x_apply = [&](const Vec& v) -> Vec {
      // X_j(theta) = (e^{i theta} a_j^+ b_j + e^{-i theta} b_j^+ a_j)/sqrt(nb)
      return (eip * create4(mode, b_apply(sign, v)) +
              std::conj(eip) * bdag_apply(sign, annihilate4(mode, v))) /
             std::sqrt(nb);
    };
    const Vec xpsi = x_apply(psi);
    const double mean = std::real(psi.dot(xpsi));
    const double sec = std::real(psi.dot(x_apply(xpsi)));
    if (jm == 0) {
      out.mean_p = mean;
      out.sec_p = sec;
    } else {
      out.mean_m = mean;
      out.sec_m = sec;
    }
  }
  // <X_p X_m>: the two commute (different modes)
  {
    const double nbp = std::real(psi.dot(bdag_apply(+1, b_apply(+1, psi))));
    const double nbm = std::real(psi.dot(bdag_apply(-1, b_apply(-1, psi))));
    auto xp = [&](const Vec& v) -> Vec {
      return (eip * create4(1, b_apply(+1, v)) + std::conj(eip) * bdag_apply(+1, annihilate4(1, v))) /
             std::sqrt(nbp);
    };
    auto xm = [&](const Vec& v) -> Vec {
      return (eip * create4(2, b_apply(-1, v)) + std::conj(eip) * bdag_apply(-1, annihilate4(2, v))) /
             std::sqrt(nbm);
    };
    out.cross = std::real(psi.dot(xp(xm(psi))));
  }
  return out;
}

}
