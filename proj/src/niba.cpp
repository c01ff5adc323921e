#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qheat/limits.hpp"

namespace qheat {

NibaModel::NibaModel(const NibaParams& p)
    : p_(p),
      consts_(polaron_constants(p.left, p.right)),
      kernel_(p.left, p.right, consts_, p.rates) {
  if (p.n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
  const double j = 0.5 * p.n_qubits;
  for (int k = 0; k < p.n_qubits; ++k) {
    const double n = k - j;
    const double jp = j * (j + 1.0) - n * (n + 1.0);
    gaps_.push_back(p.eps - consts_.xi * (2.0 * n + 1.0));
    jplus2_.push_back(p.literal_jplus ? jp * jp : jp);
  }
}

double NibaModel::energy_scale() const {
  double g = 0.0;
  for (double x : gaps_) g = std::max(g, std::abs(x));
  return std::max({std::abs(p_.delta), p_.left.temperature, p_.right.temperature, g});
}

namespace {

std::vector<double> signed_gaps(const std::vector<double>& gaps, double scale) {
  std::vector<double> nus;
  for (size_t k = 0; k < gaps.size(); ++k) {
    if (std::abs(gaps[k]) <= 1e-12 * scale) {
      std::ostringstream msg;
      msg << "NIBA chain has a zero gap at transition " << k
          << " (eps = xi (2n + 1)); the rate contains a delta function";
      throw std::domain_error(msg.str());
    }
    nus.push_back(gaps[k]);
  }
  for (double g : gaps) nus.push_back(-g);
  return nus;
}

}  // namespace

std::pair<std::vector<std::vector<cplx>>, std::vector<std::vector<cplx>>> NibaModel::rates(
    const std::vector<cplx>& chis) const {
  const int nt = p_.n_qubits;
  const auto y = kernel_.transform(signed_gaps(gaps_, energy_scale()), chis);
  std::vector<std::vector<cplx>> kp(chis.size(), std::vector<cplx>(nt)), km = kp;
  const double d2 = p_.delta * p_.delta;
  for (size_t c = 0; c < chis.size(); ++c)
    for (int k = 0; k < nt; ++k) {
      kp[c][k] = jplus2_[k] * d2 / 4.0 * y[c][k];
      km[c][k] = jplus2_[k] * d2 / 4.0 * y[c][nt + k];
    }
  return {kp, km};
}

std::pair<std::vector<cplx>, std::vector<cplx>> NibaModel::rate_derivatives() const {
  const int nt = p_.n_qubits;
  const auto dy = kernel_.transform_dchi(signed_gaps(gaps_, energy_scale()), 0.0);
  std::vector<cplx> kp(nt), km(nt);
  const double d2 = p_.delta * p_.delta;
  for (int k = 0; k < nt; ++k) {
    kp[k] = jplus2_[k] * d2 / 4.0 * dy[k];
    km[k] = jplus2_[k] * d2 / 4.0 * dy[nt + k];
  }
  return {kp, km};
}

std::vector<GeneratorMatrix> NibaModel::build(const std::vector<cplx>& chis) const {
  std::vector<cplx> all = chis;
  int zero = -1;
  for (size_t i = 0; i < all.size(); ++i)
    if (all[i] == 0.0) zero = static_cast<int>(i);
  if (zero < 0) {
    all.push_back(0.0);
    zero = static_cast<int>(all.size()) - 1;
  }
  const auto [kp, km] = rates(all);
  const int d = dim();
  std::vector<GeneratorMatrix> out;
  for (size_t c = 0; c < chis.size(); ++c) {
    CMat L = CMat::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) {
      L(i + 1, i) += kp[c][i];
      L(i, i) -= kp[zero][i];
      L(i, i + 1) += km[c][i];
      L(i + 1, i + 1) -= km[zero][i];
    }
    GeneratorMatrix g;
    g.chi = chis[c];
    g.dim = d;
    g.matrix = std::move(L);
    g.provenance = Provenance::niba;
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

// Birth-death chain populations from kappa^+_k P_k = kappa^-_k P_{k+1}.
RVec chain_populations(const std::vector<cplx>& kp, const std::vector<cplx>& km) {
  const int nt = static_cast<int>(kp.size());
  std::vector<double> logp(nt + 1, 0.0);
  for (int k = 0; k < nt; ++k) {
    const double a = kp[k].real(), b = km[k].real();
    if (!(a > 0.0) || !(b > 0.0)) {
      std::ostringstream msg;
      msg << "NIBA chain is disconnected at transition " << k << " (kappa+ = " << a << ", kappa- = " << b << ")";
      throw std::runtime_error(msg.str());
    }
    logp[k + 1] = logp[k] + std::log(a) - std::log(b);
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  RVec p(nt + 1);
  for (int k = 0; k <= nt; ++k) p(k) = std::exp(logp[k] - top);
  return p / p.sum();
}

double chain_current(const RVec& p, const std::vector<cplx>& dkp, const std::vector<cplx>& dkm) {
  cplx j = 0.0;
  for (size_t k = 0; k < dkp.size(); ++k) j += dkm[k] * p(k + 1) + dkp[k] * p(k);
  return (-kI * j).real();
}

}  // namespace

KineticChain NibaModel::chain() const {
  KineticChain c;
  const double j = 0.5 * p_.n_qubits;
  for (int k = 0; k < p_.n_qubits; ++k) c.n_values.push_back(k - j);
  c.gaps = gaps_;
  c.jplus2 = jplus2_;
  const auto [kp, km] = rates({0.0});
  c.kappa_plus = kp[0];
  c.kappa_minus = km[0];
  c.populations = chain_populations(c.kappa_plus, c.kappa_minus);
  return c;
}

std::pair<cplx, cplx> niba_rates(const NibaModel& model, int k, cplx chi) {
  if (k < 0 || k >= model.params().n_qubits) throw std::out_of_range("niba_rates: transition index");
  const auto [kp, km] = model.rates({chi});
  return {kp[0][k], km[0][k]};
}

namespace {

struct ConvolutionTables {
  BathSpectrum left, right;
  std::vector<double> omega;
  std::vector<double> cr_reversed;  // c_R(-omega_i)
  double step;
};

ConvolutionTables make_tables(const NibaModel& model, const ConvolutionOptions& opt) {
  const NibaParams& p = model.params();
  if (opt.points < 16) throw std::invalid_argument("convolution grid too small");
  ConvolutionTables t{BathSpectrum(p.left, p.rates), BathSpectrum(p.right, p.rates), {}, {}, 0.0};
  const double w = opt.span_factor * std::max({p.left.temperature, p.right.temperature, p.left.omega_c,
                                               p.right.omega_c, std::abs(model.constants().xi)});
  for (double g : model.gaps()) {
    if (std::abs(g) > 0.5 * w) throw std::domain_error("convolution grid does not cover the chain gap");
  }
  t.step = 2.0 * w / (opt.points - 1);
  for (int i = 0; i < opt.points; ++i) t.omega.push_back(-w + i * t.step);
  for (double om : t.omega) t.cr_reversed.push_back(t.right.continuum(-om));
  return t;
}

// (1/2 pi) int dw e^{-i w chi} C_L(w - nu) C_R(-w) without the elastic delta-delta
// term, and its chi derivative at the given chi.
std::pair<cplx, cplx> convolve(const ConvolutionTables& t, double nu, cplx chi) {
  cplx s = 0.0, ds = 0.0;
  const size_t n = t.omega.size();
  for (size_t i = 0; i < n; ++i) {
    const double om = t.omega[i];
    const double wt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    const cplx f = wt * std::exp(-kI * om * chi) * t.left.continuum(om - nu) * t.cr_reversed[i];
    s += f;
    ds += -kI * om * f;
  }
  s *= t.step / (2.0 * kPi);
  ds *= t.step / (2.0 * kPi);
  // delta of C_L at w = nu, delta of C_R at w = 0
  const cplx cross_l = t.left.eta_squared() * std::exp(-kI * nu * chi) * t.right.continuum(-nu);
  const cplx cross_r = t.right.eta_squared() * t.left.continuum(-nu);
  return {s + cross_l + cross_r, ds - kI * nu * cross_l};
}

}  // namespace

std::pair<cplx, cplx> niba_rates_convolution(const NibaModel& model, int k, cplx chi,
                                             const ConvolutionOptions& opt) {
  if (k < 0 || k >= model.params().n_qubits) throw std::out_of_range("niba_rates_convolution: transition index");
  const ConvolutionTables t = make_tables(model, opt);
  const double g = model.gap(k);
  const double pref = model.jplus2(k) * model.params().delta * model.params().delta / 4.0;
  return {pref * convolve(t, g, chi).first, pref * convolve(t, -g, chi).first};
}

double niba_current_convolution(const NibaModel& model, const ConvolutionOptions& opt) {
  const ConvolutionTables t = make_tables(model, opt);
  const int nt = model.params().n_qubits;
  std::vector<cplx> kp(nt), km(nt), dkp(nt), dkm(nt);
  for (int k = 0; k < nt; ++k) {
    const double pref = model.jplus2(k) * model.params().delta * model.params().delta / 4.0;
    const auto up = convolve(t, model.gap(k), 0.0);
    const auto dn = convolve(t, -model.gap(k), 0.0);
    kp[k] = pref * up.first;
    dkp[k] = pref * up.second;
    km[k] = pref * dn.first;
    dkm[k] = pref * dn.second;
  }
  return chain_current(chain_populations(kp, km), dkp, dkm);
}

cplx niba_cgf_ns2(cplx kp0, cplx km0, cplx kp_chi, cplx km_chi) {
  const cplx rad = (2.0 * kp0 - km0) * (2.0 * kp0 - km0) + 8.0 * kp_chi * km_chi;
  // principal branch, continuous from chi = 0 where rad = (2k+ + k-)^2 > 0
  if (rad.real() < 0.0 && std::abs(rad.imag()) <= 1e-12 * std::abs(rad))
    throw std::domain_error("niba_cgf_ns2: square-root argument reached the branch cut");
  return (std::sqrt(rad) - (2.0 * kp0 + km0)) / 2.0;
}

namespace {

void require_ns2_resonant(const NibaModel& model, const char* what) {
  if (model.params().n_qubits != 2 || model.params().eps != 0.0) {
    std::ostringstream msg;
    msg << what << " is derived for N_s = 2 and eps = 0";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

cplx niba_cgf_ns2(const NibaModel& model, cplx chi) {
  require_ns2_resonant(model, "niba_cgf_ns2");
  const auto [kp, km] = model.rates({chi, 0.0});
  // transition index 1 is n = 0
  return niba_cgf_ns2(kp[1][1], km[1][1], kp[0][1], km[0][1]);
}

double niba_current_ns2(const NibaModel& model) {
  require_ns2_resonant(model, "niba_current_ns2");
  const auto [kp, km] = model.rates({0.0});
  const double a = kp[0][1].real(), b = km[0][1].real();
  const double w1 = b / (2.0 * a + b), w2 = a / (2.0 * a + b);
  const double xi = model.constants().xi;
  const auto dy = model.kernel().transform_dchi({-xi, xi}, 0.0);
  const double d2 = model.params().delta * model.params().delta;
  return (-kI * d2 * (w1 * dy[0] + w2 * dy[1])).real();
}

double niba_current_general(const NibaModel& model) {
  const KineticChain c = model.chain();
  const auto [dkp, dkm] = model.rate_derivatives();
  return chain_current(c.populations, dkp, dkm);
}

}  // namespace qheat
