#include "qheat/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

namespace qheat {

CVec vectorize(const CMat& rho) {
  const int d = static_cast<int>(rho.rows());
  CVec v(d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) v(n * d + m) = rho(n, m);
  return v;
}

CMat unvectorize(const CVec& v, int d) {
  CMat rho(d, d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) rho(n, m) = v(n * d + m);
  return rho;
}

CVec identity_vector(int d) { return vectorize(CMat::Identity(d, d)); }

RateMatrices rate_matrices(const EigenBasis& basis, const RateTable& table, int chi_index) {
  const int d = basis.dim();
  RateMatrices r;
  for (int a = 0; a < 2; ++a) {
    r.gplus[a].resize(d, d);
    r.gminus[a].resize(d, d);
  }
  const auto& w = table.omegas;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      const double e = basis.gap(n, m);
      const auto it = std::lower_bound(w.begin(), w.end(), e);
      if (it == w.end() || *it != e) throw std::logic_error("rate_matrices: frequency missing from table");
      const size_t k = static_cast<size_t>(it - w.begin());
      for (int a = 0; a < 2; ++a) {
        r.gplus[a](n, m) = table.gplus[chi_index][a][k];
        // Gamma_-(E_mn) = gback(E_nm)
        r.gminus[a](n, m) = table.gback[chi_index][a][k];
      }
    }
  return r;
}

CMat assemble_neptre(const EigenBasis& basis, const RateMatrices& at_chi, const RateMatrices& at_zero) {
  const int d = basis.dim();
  const int d2 = d * d;
  CMat L = CMat::Zero(d2, d2);
  const CMat* jops[2] = {&basis.jx, &basis.jy};
  for (int a = 0; a < 2; ++a) {
    const CMat& J = *jops[a];
    const CMat& gp = at_chi.gplus[a];
    const CMat& gm = at_chi.gminus[a];
    // gain: (Gamma_-(E_m'n') + Gamma_+(E_nm)) J^{nm} J^{m'n'} rho_{mm'}
    for (int n = 0; n < d; ++n)
      for (int np = 0; np < d; ++np) {
        const int row = n * d + np;
        for (int m = 0; m < d; ++m) {
          const cplx jnm = J(n, m);
          if (jnm == 0.0) continue;
          for (int mp = 0; mp < d; ++mp) {
            const cplx jmn = J(mp, np);
            if (jmn == 0.0) continue;
            // gm(n', m') = Gamma_-(E_m'n')
            L(row, m * d + mp) += (gm(np, mp) + gp(n, m)) * jnm * jmn;
          }
        }
      }
    // loss: -Gamma_+(E_mk) J^{nm} J^{mk} rho_{kn'} - Gamma_-(E_km)... see below
    const CMat& g0p = at_zero.gplus[a];
    const CMat& g0m = at_zero.gminus[a];
    CMat left_loss = CMat::Zero(d, d);   // sum_m J^{nm} J^{mk} Gamma_+(E_mk)
    CMat right_loss = CMat::Zero(d, d);  // sum_k J^{mk} J^{kn'} Gamma*(E_km) = Gamma_-(E_mk)
    for (int n = 0; n < d; ++n)
      for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m) {
          left_loss(n, k) += J(n, m) * J(m, k) * g0p(m, k);
          // Gamma*_a(E_km) = Gamma_-(E_mk) = g0m(k, m)
          right_loss(n, k) += J(n, m) * J(m, k) * g0m(m, n);
        }
    for (int n = 0; n < d; ++n)
      for (int np = 0; np < d; ++np) {
        const int row = n * d + np;
        for (int k = 0; k < d; ++k) {
          L(row, k * d + np) -= left_loss(n, k);
          L(row, n * d + k) -= right_loss(k, np);
        }
      }
  }
  for (int n = 0; n < d; ++n)
    for (int np = 0; np < d; ++np)
      L(n * d + np, n * d + np) += -kI * (basis.energies(n) - basis.energies(np));
  return L;
}

namespace {

std::vector<double> unique_gaps(const EigenBasis& basis) {
  std::vector<double> w;
  const int d = basis.dim();
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) w.push_back(basis.gap(n, m));
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

}  // namespace

GeneratorMatrix build_neptre_generator(const EigenBasis& basis, const RateEngine& rates, cplx chi) {
  const std::vector<cplx> chis = (chi == 0.0) ? std::vector<cplx>{0.0} : std::vector<cplx>{chi, 0.0};
  const RateTable t = rates.tables(unique_gaps(basis), chis);
  const RateMatrices r0 = rate_matrices(basis, t, static_cast<int>(chis.size()) - 1);
  const RateMatrices rc = rate_matrices(basis, t, 0);
  GeneratorMatrix g;
  g.chi = chi;
  g.dim = basis.dim() * basis.dim();
  g.matrix = assemble_neptre(basis, rc, r0);
  g.provenance = Provenance::neptre;
  return g;
}

NeptreModel::NeptreModel(const NeptreParams& p)
    : p_(p),
      consts_(polaron_constants(p.left, p.right)),
      ops_(build_spin_operators(p.n_qubits)),
      basis_(eigendecompose(build_polaron_hamiltonian(p.eps, p.delta, consts_.eta, consts_.xi, ops_), ops_)),
      engine_(CorrelationFunction(p.left, p.right, consts_, p.delta), p.rates),
      omegas_(unique_gaps(basis_)) {}

double NeptreModel::energy_scale() const {
  const double spread = basis_.energies.maxCoeff() - basis_.energies.minCoeff();
  return std::max({std::abs(p_.delta), p_.left.temperature, p_.right.temperature, spread});
}

std::vector<GeneratorMatrix> NeptreModel::build(const std::vector<cplx>& chis) const {
  std::vector<cplx> all = chis;
  int zero_index = -1;
  for (size_t i = 0; i < all.size(); ++i)
    if (all[i] == 0.0) zero_index = static_cast<int>(i);
  if (zero_index < 0) {
    all.push_back(0.0);
    zero_index = static_cast<int>(all.size()) - 1;
  }
  const RateTable t = engine_.tables(omegas_, all);
  const RateMatrices r0 = rate_matrices(basis_, t, zero_index);
  std::vector<GeneratorMatrix> out;
  out.reserve(chis.size());
  for (size_t i = 0; i < chis.size(); ++i) {
    GeneratorMatrix g;
    g.chi = chis[i];
    g.dim = dim();
    g.matrix = assemble_neptre(basis_, rate_matrices(basis_, t, static_cast<int>(i)), r0);
    g.provenance = Provenance::neptre;
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

struct Eigenpair {
  cplx theta;
  CVec vec;
};

// Inverse iteration for the eigenvalue of L nearest to guess, started from v0.
// The eigenvalue is read off through the trace functional, which is the exact
// left eigenvector at chi = 0 and keeps the estimate accurate to rounding in
// the (small) dissipative rates.
Eigenpair inverse_iterate(const CMat& L, cplx guess, const CVec& v0, const CVec& trace) {
  const int n = static_cast<int>(L.rows());
  const double scale = L.cwiseAbs().maxCoeff();
  const cplx offset = cplx(-1.0, 0.5) * 1e-11 * std::max(scale, 1e-300);
  CMat M = L;
  M.diagonal().array() -= (guess + offset);
  Eigen::PartialPivLU<CMat> lu(M);
  CVec v = v0 / v0.norm();
  cplx theta = guess, prev = guess;
  double last_change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    CVec w = lu.solve(v);
    if (!w.allFinite()) throw std::runtime_error("inverse iteration: singular shifted matrix");
    v = w / w.norm();
    const cplx tv = trace.transpose() * v;
    const cplx tlv = trace.transpose() * (L * v);
    theta = (std::abs(tv) > 1e-300) ? tlv / tv : guess;
    last_change = std::abs(theta - prev);
    prev = theta;
    if (it >= 2 && last_change <= 1e-15 * scale) break;
  }
  if (last_change > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "inverse iteration did not converge (last change " << last_change << ", n=" << n << ")";
    throw std::runtime_error(msg.str());
  }
  return {theta, v};
}

}  // namespace

std::vector<cplx> track_zero_branch(const std::vector<GeneratorMatrix>& path, const CVec& trace) {
  if (path.empty()) return {};
  if (path.front().chi != 0.0) throw std::invalid_argument("track_zero_branch: path must start at chi = 0");
  std::vector<cplx> thetas;
  CVec start = trace.conjugate();
  Eigenpair cur = inverse_iterate(path[0].matrix, 0.0, start, trace);
  thetas.push_back(cur.theta);
  for (size_t k = 1; k < path.size(); ++k) {
    cplx guess = thetas.back();
    if (k >= 2) {
      const cplx dchi = path[k - 1].chi - path[k - 2].chi;
      if (std::abs(dchi) > 0.0)
        guess += (thetas[k - 1] - thetas[k - 2]) / dchi * (path[k].chi - path[k - 1].chi);
    }
    Eigenpair next = inverse_iterate(path[k].matrix, guess, cur.vec, trace);
    const double overlap = std::abs(cur.vec.dot(next.vec)) / (cur.vec.norm() * next.vec.norm());
    if (overlap < 0.5) {
      std::ostringstream msg;
      msg << "branch crossing near chi = " << path[k].chi << " (eigenvector overlap " << overlap << ")";
      throw BranchCrossing(msg.str(), path[k].chi);
    }
    thetas.push_back(next.theta);
    cur = std::move(next);
  }
  return thetas;
}

cplx cgf(const GeneratorFactory& factory, cplx chi, int path_steps) {
  if (chi == 0.0) {
    const auto g = factory.build(std::vector<cplx>{0.0});
    return track_zero_branch(g, factory.trace_vector()).front();
  }
  path_steps = std::max(1, path_steps);
  std::vector<cplx> chis;
  for (int k = 0; k <= path_steps; ++k) chis.push_back(chi * (double(k) / path_steps));
  const auto gens = factory.build(chis);
  return track_zero_branch(gens, factory.trace_vector()).back();
}

CVec steady_state_vector(const GeneratorMatrix& gen, const CVec& trace, double degeneracy_tol) {
  if (gen.chi != 0.0) throw std::invalid_argument("steady_state: generator must be at chi = 0");
  const CMat& L = gen.matrix;
  const int n = static_cast<int>(L.rows());
  if (n <= 400) {
    Eigen::BDCSVD<CMat> svd(L);
    const RVec& s = svd.singularValues();
    if (n >= 2 && s(n - 2) <= degeneracy_tol * s(0)) {
      std::ostringstream msg;
      msg << "steady state is not unique: second-smallest singular value " << s(n - 2)
          << " (largest " << s(0) << ")";
      throw DegenerateSteadyState(msg.str());
    }
  } else {
    CMat B = CMat::Zero(n + 1, n + 1);
    B.topLeftCorner(n, n) = L;
    B.block(0, n, n, 1) = trace.conjugate();
    B.block(n, 0, 1, n) = trace.transpose();
    Eigen::PartialPivLU<CMat> lu(B);
    const double rc = lu.rcond();
    if (rc < degeneracy_tol / n) {
      std::ostringstream msg;
      msg << "steady state is not unique: bordered system reciprocal condition " << rc;
      throw DegenerateSteadyState(msg.str());
    }
  }
  Eigenpair p = inverse_iterate(L, 0.0, trace.conjugate(), trace);
  const cplx tr = trace.transpose() * p.vec;
  return p.vec / tr;
}

CMat steady_state(const GeneratorMatrix& gen, double degeneracy_tol) {
  const int d = static_cast<int>(std::lround(std::sqrt(double(gen.matrix.rows()))));
  if (d * d != gen.matrix.rows()) throw std::invalid_argument("steady_state: generator is not a density-matrix superoperator");
  return unvectorize(steady_state_vector(gen, identity_vector(d), degeneracy_tol), d);
}

CMat propagate(const CMat& rho0, double t, const GeneratorMatrix& gen) {
  const int d = static_cast<int>(rho0.rows());
  if (rho0.cols() != d || d * d != gen.matrix.rows()) throw std::invalid_argument("propagate: dimension mismatch");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("propagate: t must be finite and >= 0");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10 || std::abs(rho0.trace() - 1.0) > 1e-10)
    throw std::invalid_argument("propagate: rho0 is not a normalized Hermitian matrix");
  if (t == 0.0) return rho0;
  const CMat U = (gen.matrix * t).exp();
  if (!U.allFinite()) throw std::runtime_error("propagate: matrix exponential overflowed");
  return unvectorize(U * vectorize(rho0), d);
}

CumulantResult cumulants(const GeneratorFactory& factory, const CumulantOptions& opt) {
  if (opt.orders < 1 || opt.orders > 3) throw std::invalid_argument("cumulants: orders must be 1..3");
  const double h = (opt.step > 0.0) ? opt.step : 0.02 / factory.energy_scale();
  // positive and negative paths through h/2, h, 2h
  const std::vector<cplx> chis = {0.0, 0.5 * h, h, 2.0 * h, -0.5 * h, -h, -2.0 * h};
  const auto gens = factory.build(chis);
  const CVec trace = factory.trace_vector();
  const auto pos = track_zero_branch({gens[0], gens[1], gens[2], gens[3]}, trace);
  const auto neg = track_zero_branch({gens[0], gens[4], gens[5], gens[6]}, trace);
  const cplx t0 = pos[0];
  std::map<int, cplx> th;  // key: chi in units of h/2
  th[0] = t0;
  th[1] = pos[1];
  th[2] = pos[2];
  th[4] = pos[3];
  th[-1] = neg[1];
  th[-2] = neg[2];
  th[-4] = neg[3];

  // derivatives with step s = k * h/2 (k = 1 or 2)
  auto d1 = [&](int k, double s) { return (th[-2 * k] - 8.0 * th[-k] + 8.0 * th[k] - th[2 * k]) / (12.0 * s); };
  auto d2 = [&](int k, double s) {
    return (-th[-2 * k] + 16.0 * th[-k] - 30.0 * th[0] + 16.0 * th[k] - th[2 * k]) / (12.0 * s * s);
  };
  auto d3 = [&](int k, double s) { return (-th[-2 * k] + 2.0 * th[-k] - 2.0 * th[k] + th[2 * k]) / (2.0 * s * s * s); };

  double theta_scale = 0.0;
  for (const auto& [k, v] : th) theta_scale = std::max(theta_scale, std::abs(v));
  const double dtheta = std::abs(t0) + 64.0 * std::numeric_limits<double>::epsilon() * theta_scale;

  CumulantResult res;
  res.orders = opt.orders;
  res.step_used = h;
  for (const auto& [k, v] : th) res.samples.emplace_back(0.5 * h * k, v);

  const cplx fine1 = d1(1, 0.5 * h), coarse1 = d1(2, h);
  const cplx fine2 = d2(1, 0.5 * h), coarse2 = d2(2, h);
  const cplx fine3 = d3(1, 0.5 * h), coarse3 = d3(2, h);
  const cplx r1 = (16.0 * fine1 - coarse1) / 15.0;
  const cplx r2 = (16.0 * fine2 - coarse2) / 15.0;
  const cplx r3 = (4.0 * fine3 - coarse3) / 3.0;
  // (-i)^n
  const cplx j1 = -kI * r1, j2 = -r2, j3 = kI * r3;
  const double s = 0.5 * h;
  res.j = {j1.real(), j2.real(), j3.real()};
  res.imag_part = {j1.imag(), j2.imag(), j3.imag()};
  res.error = {std::abs(fine1 - coarse1) + 1.5 * dtheta / s,
               std::abs(fine2 - coarse2) + 5.5 * dtheta / (s * s),
               std::abs(fine3 - coarse3) + 3.0 * dtheta / (s * s * s)};
  if (opt.orders < 3) res.j[2] = res.error[2] = res.imag_part[2] = 0.0;
  if (opt.orders < 2) res.j[1] = res.error[1] = res.imag_part[1] = 0.0;
  return res;
}

}  // namespace qheat
