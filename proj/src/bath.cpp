#include "qheat/bath.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qheat/special.hpp"

namespace qheat {

void BathParams::validate() const {
  if (!(alpha > 0.0) || !(omega_c > 0.0) || !(temperature > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(omega_c) || !std::isfinite(temperature)) {
    std::ostringstream msg;
    msg << "invalid bath parameters (alpha=" << alpha << ", omega_c=" << omega_c
        << ", T=" << temperature << "); all must be positive and finite";
    throw std::invalid_argument(msg.str());
  }
}

double spectral_density(double omega, const BathParams& bath) {
  return kPi * bath.alpha * omega * omega * omega / (bath.omega_c * bath.omega_c) *
         std::exp(-std::abs(omega) / bath.omega_c);
}

double bose_occupation(double omega, double temperature) {
  if (omega == 0.0) throw std::domain_error("bose_occupation: omega = 0");
  return 1.0 / std::expm1(omega / temperature);
}

namespace {

using boost::math::quadrature::gauss_kronrod;

// int_0^inf f with the upper limit doubled until the exponential cutoff makes
// the remainder negligible.
template <class F>
double integrate_to_infinity(F f, double scale, double tol, double* err_out) {
  double total = 0.0, err_total = 0.0;
  double a = 0.0, b = 10.0 * scale;
  for (int iter = 0; iter < 60; ++iter) {
    double err = 0.0;
    const double piece = gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err);
    total += piece;
    err_total += err;
    if (std::abs(piece) <= tol * std::abs(total) && iter > 0) {
      if (err_out) *err_out = err_total;
      return total;
    }
    a = b;
    b *= 2.0;
  }
  std::ostringstream msg;
  msg << "quadrature did not converge; achieved error " << err_total;
  throw std::runtime_error(msg.str());
}

}  // namespace

PolaronConstants polaron_constants(const BathParams& left, const BathParams& right, double tol) {
  left.validate();
  right.validate();
  PolaronConstants pc;
  pc.eta = 1.0;
  pc.xi = 0.0;
  int k = 0;
  for (const BathParams* b : {&left, &right}) {
    const double wc = b->omega_c, T = b->temperature, alpha = b->alpha;
    // (1/2pi) G coth(w/2T) / w^2 = alpha/(2 wc^2) * w coth(w/2T) e^{-w/wc}
    auto feta = [=](double w) {
      const double wcoth = (w < 1e-8 * T) ? 2.0 * T : w / std::tanh(w / (2.0 * T));
      return alpha / (2.0 * wc * wc) * wcoth * std::exp(-w / wc);
    };
    // (1/pi) G / w = alpha/wc^2 * w^2 e^{-w/wc}
    auto fxi = [=](double w) { return alpha / (wc * wc) * w * w * std::exp(-w / wc); };
    double e1 = 0.0, e2 = 0.0;
    const double s_eta = integrate_to_infinity(feta, wc, tol, &e1);
    const double s_xi = integrate_to_infinity(fxi, wc, tol, &e2);
    pc.per_bath_eta[k++] = std::exp(-s_eta);
    pc.eta *= std::exp(-s_eta);
    pc.xi += s_xi;
    pc.quad_error = std::max({pc.quad_error, e1, e2});
  }
  return pc;
}

cplx propagator_q_exact(const BathParams& b, cplx tau) {
  const double T = b.temperature, c = T / b.omega_c;
  const cplx it = kI * T * tau;
  return b.alpha * c * c * (polygamma(1, c + it) + polygamma(1, 1.0 + c - it));
}

cplx propagator_q_dot(const BathParams& b, cplx tau) {
  const double T = b.temperature, c = T / b.omega_c;
  const cplx it = kI * T * tau;
  return b.alpha * c * c * kI * T * (polygamma(2, c + it) - polygamma(2, 1.0 + c - it));
}

cplx propagator_q_ddot(const BathParams& b, cplx tau) {
  const double T = b.temperature, c = T / b.omega_c;
  const cplx it = kI * T * tau;
  return -b.alpha * c * c * T * T * (polygamma(3, c + it) + polygamma(3, 1.0 + c - it));
}

cplx propagator_q_quadrature(const BathParams& b, double tau, double tol) {
  const double wc = b.omega_c, T = b.temperature, alpha = b.alpha;
  // (1/pi) G / w^2 = alpha/wc^2 * w e^{-w/wc}
  auto fre = [=](double w) {
    const double wcoth = (w < 1e-8 * T) ? 2.0 * T : w / std::tanh(w / (2.0 * T));
    return alpha / (wc * wc) * wcoth * std::exp(-w / wc) * std::cos(w * tau);
  };
  auto fim = [=](double w) {
    return -alpha / (wc * wc) * w * std::exp(-w / wc) * std::sin(w * tau);
  };
  // finite range: the integrand is below 1e-30 relative beyond 80 wc
  const double W = 80.0 * wc;
  double e1 = 0.0, e2 = 0.0;
  const double re = gauss_kronrod<double, 61>::integrate(fre, 0.0, W, 25, tol, &e1);
  const double im = gauss_kronrod<double, 61>::integrate(fim, 0.0, W, 25, tol, &e2);
  return {re, im};
}

cplx propagator_q_zero_temperature(double alpha, double omega_c, double tau) {
  const cplx d = 1.0 + kI * omega_c * tau;
  return alpha / (d * d);
}

cplx PropagatorGrid::operator()(double tau) const {
  if (!std::isfinite(tau)) throw std::domain_error("PropagatorGrid: non-finite tau");
  if (tau < 0.0) return std::conj((*this)(-tau));
  if (tau >= tau_max()) return tail_a / (tau * tau) + tail_b / (tau * tau * tau);
  const auto it = std::upper_bound(tau_grid.begin(), tau_grid.end(), tau);
  const size_t i = static_cast<size_t>(it - tau_grid.begin()) - 1;
  const double h = tau_grid[i + 1] - tau_grid[i];
  const double u = (tau - tau_grid[i]) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 1 - 3 * u2 + 2 * u3, h10 = u - 2 * u2 + u3;
  const double h01 = 3 * u2 - 2 * u3, h11 = u3 - u2;
  return h00 * q_values[i] + h10 * h * q_derivs[i] + h01 * q_values[i + 1] +
         h11 * h * q_derivs[i + 1];
}

void PropagatorGrid::dump_csv(std::ostream& os) const {
  os << "tau,re,im\n" << std::setprecision(17);
  for (size_t i = 0; i < tau_grid.size(); ++i)
    os << tau_grid[i] << ',' << q_values[i].real() << ',' << q_values[i].imag() << '\n';
}

PropagatorGrid propagator_q(const BathParams& bath, double tol) {
  bath.validate();
  if (!(tol > 1e-12 && tol < 1e-3)) throw std::invalid_argument("propagator_q: tol must lie in (1e-12, 1e-3)");
  const double q0 = std::abs(propagator_q_exact(bath, 0.0));

  double tau_max = 1.0;
  while (std::abs(propagator_q_exact(bath, tau_max)) >= tol * q0) {
    tau_max *= 2.0;
    if (tau_max > 1e9) throw std::runtime_error("propagator_q: propagator did not decay within tau < 1e9");
  }

  const double scale = std::min(1.0 / bath.omega_c, 1.0 / bath.temperature);
  // relative step h/tau; Hermite interpolation error ~ (h/scale)^4 / 384
  double growth = 0.5 * std::pow(tol, 0.25);
  for (int attempt = 0; attempt < 12; ++attempt, growth *= 0.5) {
    PropagatorGrid g;
    g.bath = bath;
    g.tol = tol;
    const double h0 = growth * scale;
    double t = 0.0;
    g.tau_grid.push_back(0.0);
    while (t < tau_max) {
      t += std::max(h0, growth * t);
      g.tau_grid.push_back(std::min(t, tau_max));
      if (t >= tau_max) break;
    }
    for (double s : g.tau_grid) {
      g.q_values.push_back(propagator_q_exact(bath, s));
      g.q_derivs.push_back(propagator_q_dot(bath, s));
    }
    const double tm = g.tau_max();
    const cplx f = g.q_values.back(), df = g.q_derivs.back();
    g.tail_a = df * tm * tm * tm + 3.0 * f * tm * tm;
    g.tail_b = -2.0 * f * tm * tm * tm - df * tm * tm * tm * tm;
    double worst = 0.0;
    for (size_t i = 0; i + 1 < g.tau_grid.size(); ++i) {
      const double mid = 0.5 * (g.tau_grid[i] + g.tau_grid[i + 1]);
      worst = std::max(worst, std::abs(g(mid) - propagator_q_exact(bath, mid)));
    }
    if (worst < tol * q0) return g;
  }
  throw std::runtime_error("propagator_q: interpolation tolerance not reached");
}

}  // namespace qheat
