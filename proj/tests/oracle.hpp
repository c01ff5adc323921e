#pragma once

// Independent reference implementations shared by the test binaries.

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "qheat/liouvillian.hpp"
#include "qheat/rates.hpp"

namespace oracle {

using qheat::cplx;

// int_0^inf C_a(chi, +-tau) e^{-i w tau} dtau by double-exponential Fourier quadrature.
inline cplx half_fourier(const qheat::CorrelationFunction& c, qheat::Channel a, cplx chi, qheat::Sign s,
                         double w) {
  boost::math::quadrature::ooura_fourier_sin<double> fs(1e-13);
  boost::math::quadrature::ooura_fourier_cos<double> fc(1e-13);
  auto re = [&](double t) { return c(a, chi, s, t).real(); };
  auto im = [&](double t) { return c(a, chi, s, t).imag(); };
  const double aw = std::abs(w), sg = w >= 0.0 ? 1.0 : -1.0;
  const double rc = fc.integrate(re, aw).first, rs = fs.integrate(re, aw).first;
  const double ic = fc.integrate(im, aw).first, is = fs.integrate(im, aw).first;
  return {rc + sg * is, ic - sg * rs};
}

}  // namespace oracle

#include <boost/math/quadrature/exp_sinh.hpp>

namespace oracle {

// Same integral for any w, including w = 0.
inline cplx half_fourier_any(const qheat::CorrelationFunction& c, qheat::Channel a, cplx chi, qheat::Sign s,
                             double w) {
  if (w != 0.0) return half_fourier(c, a, chi, s, w);
  boost::math::quadrature::exp_sinh<double> es;
  const double re = es.integrate([&](double t) { return c(a, chi, s, t).real(); }, 1e-13);
  const double im = es.integrate([&](double t) { return c(a, chi, s, t).imag(); }, 1e-13);
  return {re, im};
}

}  // namespace oracle

namespace oracle {

using namespace qheat;

inline CMat kron(const CMat& a, const CMat& b) {
  CMat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Two-level generator built in the Dicke basis from operator products,
//   L rho = -i[H, rho] + sum_a (P_a rho J_a + J_a rho M_a - J_a P0_a rho - rho M0_a J_a),
// P_a = sum Gamma^chi_{a,+}(E_nm) |n><n|J_a|m><m|, M_a = sum Gamma^chi_{a,-}(E_mn) |m><m|J_a|n><n|,
// with analytic eigenvectors and rates from a separate quadrature.  With
// conj_form = true the chi = 0 form Gamma_a(E_nm) + Gamma*_a(E_n'm') is used instead.
inline CMat two_level_oracle(const NeptreParams& p, double chi, bool conj_form) {
  const PolaronConstants pc = polaron_constants(p.left, p.right);
  const CorrelationFunction corr(p.left, p.right, pc, p.delta);
  const double a = -0.5 * p.eps - 0.25 * pc.xi, d = 0.5 * p.eps - 0.25 * pc.xi, c = 0.5 * pc.eta * p.delta;
  const double mid = 0.5 * (a + d), rad = std::hypot(0.5 * (d - a), c);
  const double e[2] = {mid - rad, mid + rad};
  CMat proj[2];
  for (int n = 0; n < 2; ++n) {
    CVec v(2);
    v << c, e[n] - a;
    v.normalize();
    proj[n] = v * v.adjoint();
  }
  CMat h = e[0] * proj[0] + e[1] * proj[1];
  CMat jx(2, 2), jy(2, 2);
  jx << 0.0, 0.5, 0.5, 0.0;
  jy << 0.0, cplx(0.0, 0.5), cplx(0.0, -0.5), 0.0;
  const CMat id = CMat::Identity(2, 2);
  CMat L = -kI * (kron(h, id) - kron(id, h.transpose()));
  const Channel chans[2] = {Channel::x, Channel::y};
  const CMat* js[2] = {&jx, &jy};
  for (int k = 0; k < 2; ++k) {
    const CMat& J = *js[k];
    CMat P = CMat::Zero(2, 2), M = CMat::Zero(2, 2), P0 = CMat::Zero(2, 2), M0 = CMat::Zero(2, 2);
    for (int n = 0; n < 2; ++n)
      for (int m = 0; m < 2; ++m) {
        const double w = e[n] - e[m];
        const CMat piece = proj[n] * J * proj[m];
        const cplx gp0 = oracle::half_fourier_any(corr, chans[k], 0.0, Sign::plus, w);
        // chi = 0 form: Gamma*_a(E_n'm') on the (m', n') element
        const cplx gm0 = conj_form ? std::conj(oracle::half_fourier_any(corr, chans[k], 0.0, Sign::plus, -w))
                             : oracle::half_fourier_any(corr, chans[k], 0.0, Sign::minus, w);
        P0 += gp0 * piece;
        M0 += gm0 * piece;
        if (conj_form) {
          P += gp0 * piece;
          M += gm0 * piece;
        } else {
          P += oracle::half_fourier_any(corr, chans[k], chi, Sign::plus, w) * piece;
          M += oracle::half_fourier_any(corr, chans[k], chi, Sign::minus, w) * piece;
        }
      }
    // M holds Gamma_-(E_nm) on |n><n|J|m><m|, i.e. the (m', n') element uses E_m'n'
    L += kron(P, J.transpose()) + kron(J, M.transpose()) - kron(J * P0, id) - kron(id, (M0 * J).transpose());
  }
  return L;
}

}  // namespace oracle
