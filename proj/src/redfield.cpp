#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qheat/limits.hpp"

namespace qheat {

namespace {

double g_n(const BathParams& b, double w) {
  return w == 0.0 ? 0.0 : spectral_density(w, b) * bose_occupation(w, b.temperature);
}
double g_n1(const BathParams& b, double w) {
  return w == 0.0 ? 0.0 : spectral_density(w, b) * (1.0 + bose_occupation(w, b.temperature));
}

struct Resonant {
  double gl, gr, nl, nr, x;
};

Resonant resonant_factors(const BathParams& left, const BathParams& right, double delta) {
  left.validate();
  right.validate();
  Resonant r;
  r.gl = spectral_density(delta, left);
  r.gr = spectral_density(delta, right);
  r.nl = bose_occupation(delta, left.temperature);
  r.nr = bose_occupation(delta, right.temperature);
  r.x = (r.gl * r.nl + r.gr * r.nr) / (r.gl * (1.0 + r.nl) + r.gr * (1.0 + r.nr));
  if (!(r.x > 0.0 && r.x < 1.0))
    throw std::domain_error("weak-coupling closed form requires 0 < x < 1 (check Delta > 0 and temperatures)");
  return r;
}

}  // namespace

GeneratorMatrix build_redfield_generator(const EigenBasis& basis, const BathParams& left,
                                         const BathParams& right, cplx chi) {
  const int d = basis.dim();
  const RVec& e = basis.energies;
  const CMat& jz = basis.jz;
  CMat L = CMat::Zero(d * d, d * d);
  const BathParams* baths[2] = {&left, &right};
  for (int v = 0; v < 2; ++v) {
    const BathParams& b = *baths[v];
    const cplx cf = (v == 1) ? chi : cplx(0.0);
    CMat gn(d, d), gn1(d, d);
    for (int m = 0; m < d; ++m)
      for (int mp = 0; mp < d; ++mp) {
        gn(m, mp) = g_n(b, e(m) - e(mp));
        gn1(m, mp) = g_n1(b, e(m) - e(mp));
      }
    // loss terms collapse to D x D matrices
    CMat left_loss = CMat::Zero(d, d), right_loss = CMat::Zero(d, d);
    for (int n = 0; n < d; ++n)
      for (int mp = 0; mp < d; ++mp)
        for (int m = 0; m < d; ++m) {
          left_loss(n, mp) += gn(m, mp) * jz(n, m) * jz(m, mp);
          right_loss(n, mp) += gn1(n, m) * jz(n, m) * jz(m, mp);
        }
    for (int n = 0; n < d; ++n)
      for (int np = 0; np < d; ++np) {
        const int row = n * d + np;
        for (int k = 0; k < d; ++k) {
          L(row, k * d + np) -= left_loss(n, k);
          L(row, n * d + k) -= right_loss(k, np);
        }
        for (int m = 0; m < d; ++m) {
          const double enm = e(n) - e(m);
          const cplx a = gn(n, m) * std::exp(-kI * enm * cf) * jz(n, m);
          for (int mp = 0; mp < d; ++mp) {
            const double emn = e(mp) - e(np);
            const cplx bterm = gn1(mp, np) * std::exp(kI * emn * cf) * jz(n, m);
            L(row, m * d + mp) += (a + bterm) * jz(mp, np);
          }
        }
      }
  }
  for (int n = 0; n < d; ++n)
    for (int np = 0; np < d; ++np) L(n * d + np, n * d + np) += -kI * (e(n) - e(np));
  GeneratorMatrix g;
  g.chi = chi;
  g.dim = d * d;
  g.matrix = std::move(L);
  g.provenance = Provenance::redfield;
  return g;
}

RedfieldModel::RedfieldModel(const RedfieldParams& p)
    : p_(p), ops_(build_spin_operators(p.n_qubits)),
      basis_(eigendecompose(p.eps * ops_.jz + p.delta * ops_.jx, ops_)) {
  p_.left.validate();
  p_.right.validate();
}

double RedfieldModel::energy_scale() const {
  const double spread = basis_.energies.maxCoeff() - basis_.energies.minCoeff();
  return std::max({std::abs(p_.delta), p_.left.temperature, p_.right.temperature, spread});
}

std::vector<GeneratorMatrix> RedfieldModel::build(const std::vector<cplx>& chis) const {
  std::vector<GeneratorMatrix> out;
  out.reserve(chis.size());
  for (cplx c : chis) out.push_back(build_redfield_generator(basis_, p_.left, p_.right, c));
  return out;
}

RVec RedfieldModel::populations() const {
  const CMat rho = steady_state(build(0.0));
  return rho.diagonal().real();
}

RedfieldClosedForm redfield_closed_form(int n_qubits, const BathParams& left, const BathParams& right,
                                        double delta) {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
  const Resonant r = resonant_factors(left, right, delta);
  const double x = r.x;
  const int n = n_qubits;
  RedfieldClosedForm cf;
  cf.x = x;
  cf.populations.resize(n + 1);
  const double norm = (1.0 - x) / (1.0 - std::pow(x, n + 1));
  for (int k = 0; k <= n; ++k) cf.populations(k) = std::pow(x, k) * norm;
  const double u = 1.0 / (1.0 - x), v = x / (1.0 - x);
  const double num = (n - 2.0 * v) * std::pow(u, n + 1) + std::pow(v, n + 1) * (n + 2.0 * u);
  const double den = std::pow(u, n + 1) - std::pow(v, n + 1);
  cf.i_n = num / den;
  cf.j_weak = 2.0 * (r.nl - r.nr) * r.gl * r.gr / (r.gl + r.gr) * cf.i_n;
  return cf;
}

double weak_current_analytic(int n_qubits, const BathParams& left, const BathParams& right, double delta) {
  return redfield_closed_form(n_qubits, left, right, delta).j_weak;
}

double weak_current_ns2_printed(const BathParams& left, const BathParams& right, double delta) {
  const Resonant r = resonant_factors(left, right, delta);
  const double x = r.x;
  return 4.0 * (r.nl - r.nr) * r.gl * r.gr / (r.gl + r.gr) * (2.0 - x) * (1.0 + x * x * x) / (1.0 + x + x * x);
}

double weak_current_consistent(int n_qubits, const BathParams& left, const BathParams& right, double delta) {
  return 0.25 * delta * weak_current_analytic(n_qubits, left, right, delta);
}

double weak_current_offresonant(const EigenBasis& basis, const BathParams& right, const RVec& populations) {
  const int d = basis.dim();
  if (populations.size() != d) throw std::invalid_argument("weak_current_offresonant: population size mismatch");
  double j = 0.0;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      const double emn = basis.energies(m) - basis.energies(n);
      if (emn == 0.0) continue;
      const double w = std::norm(basis.jz(n, m));
      j += 2.0 * emn * g_n1(right, emn) * w * populations(m);
    }
  return j;
}

double weak_current_offresonant(const RedfieldModel& model) {
  return weak_current_offresonant(model.basis(), model.params().right, model.populations());
}

SuperradiantCurrent superradiant_current(int n_qubits, const BathParams& left, const BathParams& right,
                                         double delta) {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
  const Resonant r = resonant_factors(left, right, delta);
  const double ns = n_qubits;
  SuperradiantCurrent s;
  s.value = (1.0 - r.x) / (3.0 * r.x) * (r.nl - r.nr) * r.gl * r.gr / (r.gl + r.gr) * ns * ns;
  s.validity = r.x / ((1.0 - r.x) * ns);
  return s;
}

}  // namespace qheat
