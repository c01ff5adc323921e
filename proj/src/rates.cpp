#include "qheat/rates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qheat {

namespace {

double lower_strip(const BathParams& b) { return 1.0 / b.omega_c + 1.0 / b.temperature; }

double tau_max_for(const BathParams& b, double tau_tol) {
  const double q0 = std::abs(propagator_q_exact(b, 0.0));
  double t = 1.0;
  while (std::abs(propagator_q_exact(b, t)) >= tau_tol * q0) {
    t *= 1.25;
    if (t > 1e8) throw std::runtime_error("time grid: propagator did not decay");
  }
  return t;
}

// Fills value/derivative (with respect to s) of nf functions along
// tau = sign * s - i y.
template <class F>
HalfLineBatch sample_line(const TauGrid& grid, int nf, double sign, double y, F&& eval) {
  HalfLineBatch batch(grid.size(), nf);
  std::vector<cplx> val(nf), der(nf);
  for (int i = 0; i < grid.size(); ++i) {
    const cplx tau(sign * grid.nodes[i], -y);
    eval(tau, val.data(), der.data());
    for (int k = 0; k < nf; ++k) {
      batch.value(i, k) = val[k];
      batch.deriv(i, k) = sign * der[k];
    }
  }
  return batch;
}

// e^q - 1 without cancellation for small |q|
cplx expm1_small(cplx q, cplx eq) {
  if (std::abs(q) < 1e-3) return q * (1.0 + q * (0.5 + q * (1.0 / 6.0 + q * (1.0 / 24.0))));
  return eq - 1.0;
}

}  // namespace

TauGrid make_tau_grid(const BathParams& left, const BathParams& right, double tol, double tau_tol) {
  const double f = std::pow(std::max(tol, 1e-14) / 1e-7, 0.25);
  const double scale = std::min({1.0 / left.omega_c, 1.0 / left.temperature, 1.0 / right.omega_c,
                                 1.0 / right.temperature});
  const double tmax = std::max(tau_max_for(left, tau_tol), tau_max_for(right, tau_tol));
  return TauGrid::graded(0.01 * f * scale, 0.004 * f, tmax);
}

CorrelationFunction::CorrelationFunction(const BathParams& left, const BathParams& right,
                                         const PolaronConstants& consts, double delta)
    : left_(left), right_(right), consts_(consts), delta_(delta),
      pref_(consts.eta * delta * consts.eta * delta) {
  left_.validate();
  right_.validate();
}

cplx CorrelationFunction::phase(cplx chi, cplx tau) const {
  return propagator_q_exact(left_, tau) + propagator_q_exact(right_, tau - chi);
}

cplx CorrelationFunction::phase_dot(cplx chi, cplx tau) const {
  return propagator_q_dot(left_, tau) + propagator_q_dot(right_, tau - chi);
}

cplx CorrelationFunction::from_phase(Channel a, cplx q) const {
  if (a == Channel::x) {
    const cplx s = std::sinh(0.5 * q);
    return pref_ * 2.0 * s * s;
  }
  return pref_ * std::sinh(q);
}

cplx CorrelationFunction::from_phase_dot(Channel a, cplx q, cplx qdot) const {
  return pref_ * (a == Channel::x ? std::sinh(q) : std::cosh(q)) * qdot;
}

cplx CorrelationFunction::operator()(Channel a, cplx chi, Sign s, double tau) const {
  if (!std::isfinite(tau)) throw std::domain_error("correlation: non-finite tau");
  const double t = (s == Sign::plus) ? tau : -tau;
  return from_phase(a, phase(chi, t));
}

double CorrelationFunction::contour_shift(cplx chi) const {
  const double lr = lower_strip(right_);
  if (!(chi.imag() < lr) || !(-chi.imag() < 1.0 / right_.omega_c)) {
    std::ostringstream msg;
    msg << "counting field " << chi << " outside the analyticity strip ("
        << -1.0 / right_.omega_c << " < Im chi < " << lr << ")";
    throw std::domain_error(msg.str());
  }
  return 0.75 * std::min(lower_strip(left_), lr - chi.imag());
}

cplx correlation_c(Channel a, double chi, Sign s, double tau, const PropagatorGrid& left,
                   const PropagatorGrid& right, const PolaronConstants& consts, double delta) {
  if (!std::isfinite(tau) || !std::isfinite(chi)) throw std::domain_error("correlation_c: non-finite argument");
  const double t = (s == Sign::plus) ? tau : -tau;
  const cplx q = left(t) + right(t - chi);
  const double pref = consts.eta * delta * consts.eta * delta;
  if (a == Channel::x) {
    const cplx sh = std::sinh(0.5 * q);
    return pref * 2.0 * sh * sh;
  }
  return pref * std::sinh(q);
}

RateEngine::RateEngine(CorrelationFunction corr, RateOptions opt)
    : corr_(std::move(corr)), opt_(opt),
      grid_(make_tau_grid(corr_.left(), corr_.right(), opt.tol, opt.tau_tol)) {}

RateTable RateEngine::tables(const std::vector<double>& omegas, const std::vector<cplx>& chis) const {
  const int nchi = static_cast<int>(chis.size());
  const int nf = 2 * nchi;
  std::vector<double> ys(nchi);
  for (int j = 0; j < nchi; ++j) ys[j] = corr_.contour_shift(chis[j]);

  auto eval_all = [&](cplx tau, cplx* val, cplx* der) {
    for (int j = 0; j < nchi; ++j) {
      const cplx q = corr_.phase(chis[j], tau);
      const cplx qd = corr_.phase_dot(chis[j], tau);
      for (int a = 0; a < 2; ++a) {
        val[2 * j + a] = corr_.from_phase(Channel(a), q);
        der[2 * j + a] = corr_.from_phase_dot(Channel(a), q, qd);
      }
    }
  };

  // Real line (shared by all chi).
  const HalfLineBatch rpos = sample_line(grid_, nf, +1.0, 0.0, eval_all);
  const HalfLineBatch rneg = sample_line(grid_, nf, -1.0, 0.0, eval_all);

  // Shifted lines: each chi has its own shift; sample per chi and merge.
  const bool any_positive = std::any_of(omegas.begin(), omegas.end(), [](double w) { return w > 0.0; });
  HalfLineBatch spos(grid_.size(), nf), sneg(grid_.size(), nf);
  if (any_positive) {
    for (int j = 0; j < nchi; ++j) {
      auto eval = [&](cplx tau, cplx* val, cplx* der) {
        const cplx q = corr_.phase(chis[j], tau);
        const cplx qd = corr_.phase_dot(chis[j], tau);
        for (int a = 0; a < 2; ++a) {
          val[a] = corr_.from_phase(Channel(a), q);
          der[a] = corr_.from_phase_dot(Channel(a), q, qd);
        }
      };
      const HalfLineBatch p = sample_line(grid_, 2, +1.0, ys[j], eval);
      const HalfLineBatch n = sample_line(grid_, 2, -1.0, ys[j], eval);
      for (int i = 0; i < grid_.size(); ++i)
        for (int a = 0; a < 2; ++a) {
          spos.value(i, 2 * j + a) = p.f[size_t(i) * 2 + a];
          spos.deriv(i, 2 * j + a) = p.df[size_t(i) * 2 + a];
          sneg.value(i, 2 * j + a) = n.f[size_t(i) * 2 + a];
          sneg.deriv(i, 2 * j + a) = n.df[size_t(i) * 2 + a];
        }
    }
  }

  RateTable out;
  out.omegas = omegas;
  out.chis = chis;
  out.gplus.resize(nchi);
  out.gback.resize(nchi);
  for (int j = 0; j < nchi; ++j)
    for (int a = 0; a < 2; ++a) {
      out.gplus[j][a].assign(omegas.size(), 0.0);
      out.gback[j][a].assign(omegas.size(), 0.0);
    }

  std::vector<cplx> ap(nf), bm(nf), sp(nf), sm(nf);
  for (size_t iw = 0; iw < omegas.size(); ++iw) {
    const double w = omegas[iw];
    std::fill(ap.begin(), ap.end(), 0.0);
    std::fill(bm.begin(), bm.end(), 0.0);
    half_transform(grid_, rpos, w, ap.data());   // int_0^inf g(s) e^{-iws}
    half_transform(grid_, rneg, -w, bm.data());  // int_0^inf g(-s) e^{+iws}
    if (w > 0.0) {
      std::fill(sp.begin(), sp.end(), 0.0);
      std::fill(sm.begin(), sm.end(), 0.0);
      half_transform(grid_, spos, w, sp.data());
      half_transform(grid_, sneg, -w, sm.data());
    }
    for (int j = 0; j < nchi; ++j) {
      const double damp = std::exp(-w * ys[j]);
      for (int a = 0; a < 2; ++a) {
        const int k = 2 * j + a;
        cplx gp = ap[k], gb = bm[k];
        const cplx d = gp - gb;
        const cplx s = (w > 0.0) ? damp * (sp[k] + sm[k]) : gp + gb;
        if (opt_.drop_lamb_shift) {
          gp = 0.5 * s;
          gb = 0.5 * s;
        } else if (w > 0.0) {
          gp = 0.5 * (s + d);
          gb = 0.5 * (s - d);
        }
        out.gplus[j][a][iw] = gp;
        out.gback[j][a][iw] = gb;
      }
    }
  }
  return out;
}

cplx RateEngine::gamma(Channel a, cplx chi, Sign s, double omega) const {
  if (s == Sign::plus) return tables({omega}, {chi}).gplus[0][int(a)][0];
  return tables({-omega}, {chi}).gback[0][int(a)][0];
}

cplx rate_gamma(Channel a, cplx chi, Sign s, double omega, const RateEngine& engine) {
  return engine.gamma(a, chi, s, omega);
}

BathSpectrum::BathSpectrum(const BathParams& bath, RateOptions opt)
    : bath_(bath),
      eta2_(std::exp(-propagator_q_exact(bath, 0.0).real())),
      grid_(make_tau_grid(bath, bath, opt.tol, opt.tau_tol)),
      shift_(0.75 * lower_strip(bath)),
      real_pos_(1, 1), real_neg_(1, 1), shifted_pos_(1, 1), shifted_neg_(1, 1) {
  auto eval = [this](cplx tau, cplx* val, cplx* der) {
    const cplx q = propagator_q_exact(bath_, tau);
    const cplx e = std::exp(q);
    val[0] = eta2_ * expm1_small(q, e);
    der[0] = eta2_ * e * propagator_q_dot(bath_, tau);
  };
  real_pos_ = sample_line(grid_, 1, +1.0, 0.0, eval);
  real_neg_ = sample_line(grid_, 1, -1.0, 0.0, eval);
  shifted_pos_ = sample_line(grid_, 1, +1.0, shift_, eval);
  shifted_neg_ = sample_line(grid_, 1, -1.0, shift_, eval);
}

cplx BathSpectrum::continuum_complex(double omega) const {
  // c(w) = int dt e^{iwt} K(t) = full-line transform at nu = -w
  const double nu = -omega;
  cplx a = 0.0, b = 0.0;
  if (nu > 0.0) {
    half_transform(grid_, shifted_pos_, nu, &a);
    half_transform(grid_, shifted_neg_, -nu, &b);
    return std::exp(-nu * shift_) * (a + b);
  }
  half_transform(grid_, real_pos_, nu, &a);
  half_transform(grid_, real_neg_, -nu, &b);
  return a + b;
}

std::vector<double> BathSpectrum::continuum(const std::vector<double>& omegas) const {
  std::vector<double> out(omegas.size());
  for (size_t i = 0; i < omegas.size(); ++i) out[i] = continuum(omegas[i]);
  return out;
}

void BathSpectrum::dump_csv(std::ostream& os, const std::vector<double>& omegas) const {
  os << "omega,re,im\n" << std::setprecision(17);
  for (double w : omegas) {
    const cplx c = continuum_complex(w);
    os << w << ',' << c.real() << ',' << c.imag() << '\n';
  }
}

double niba_spectrum(const BathParams& bath, double omega) {
  return BathSpectrum(bath).continuum(omega);
}

NibaKernel::NibaKernel(const BathParams& left, const BathParams& right,
                       const PolaronConstants& consts, RateOptions opt)
    : left_(left), right_(right), consts_(consts), opt_(opt),
      grid_(make_tau_grid(left, right, opt.tol, opt.tau_tol)) {}

std::vector<std::vector<cplx>> NibaKernel::run(const std::vector<double>& nus,
                                               const std::vector<cplx>& chis, bool derivative) const {
  const int nchi = static_cast<int>(chis.size());
  const CorrelationFunction corr(left_, right_, consts_, 1.0);
  const double eta2 = consts_.eta * consts_.eta;
  std::vector<double> ys(nchi);
  for (int j = 0; j < nchi; ++j) ys[j] = corr.contour_shift(chis[j]);

  auto eval_for = [&](int j) {
    return [&, j](cplx tau, cplx* val, cplx* der) {
      const cplx q = corr.phase(chis[j], tau);
      const cplx qd = corr.phase_dot(chis[j], tau);
      const cplx e = std::exp(q);
      if (!derivative) {
        val[0] = eta2 * expm1_small(q, e);
        der[0] = eta2 * e * qd;
      } else {
        // d/dchi exp(Q_R(t - chi)) = -Q_R'(t - chi) exp(...)
        const cplx qr1 = propagator_q_dot(right_, tau - chis[j]);
        const cplx qr2 = propagator_q_ddot(right_, tau - chis[j]);
        val[0] = -eta2 * e * qr1;
        der[0] = -eta2 * e * (qd * qr1 + qr2);
      }
    };
  };

  std::vector<std::vector<cplx>> out(nchi, std::vector<cplx>(nus.size(), 0.0));
  const bool any_pos = std::any_of(nus.begin(), nus.end(), [](double v) { return v > 0.0; });
  const bool any_nonpos = std::any_of(nus.begin(), nus.end(), [](double v) { return v <= 0.0; });
  for (int j = 0; j < nchi; ++j) {
    auto eval = eval_for(j);
    if (any_nonpos) {
      const HalfLineBatch p = sample_line(grid_, 1, +1.0, 0.0, eval);
      const HalfLineBatch n = sample_line(grid_, 1, -1.0, 0.0, eval);
      for (size_t i = 0; i < nus.size(); ++i) {
        if (nus[i] > 0.0) continue;
        cplx a = 0.0, b = 0.0;
        half_transform(grid_, p, nus[i], &a);
        half_transform(grid_, n, -nus[i], &b);
        out[j][i] = a + b;
      }
    }
    if (any_pos) {
      const HalfLineBatch p = sample_line(grid_, 1, +1.0, ys[j], eval);
      const HalfLineBatch n = sample_line(grid_, 1, -1.0, ys[j], eval);
      for (size_t i = 0; i < nus.size(); ++i) {
        if (nus[i] <= 0.0) continue;
        cplx a = 0.0, b = 0.0;
        half_transform(grid_, p, nus[i], &a);
        half_transform(grid_, n, -nus[i], &b);
        out[j][i] = std::exp(-nus[i] * ys[j]) * (a + b);
      }
    }
  }
  return out;
}

std::vector<std::vector<cplx>> NibaKernel::transform(const std::vector<double>& nus,
                                                     const std::vector<cplx>& chis) const {
  return run(nus, chis, false);
}

std::vector<cplx> NibaKernel::transform_dchi(const std::vector<double>& nus, cplx chi) const {
  return run(nus, {chi}, true)[0];
}

}  // namespace qheat
