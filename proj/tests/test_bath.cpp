#include <doctest.h>

#include <cmath>

#include "qheat/bath.hpp"
#include "qheat/rates.hpp"

using namespace qheat;

TEST_CASE("spectral density") {
  const BathParams b{Side::L, 0.01, 6.0, 1.0};
  CHECK(spectral_density(0.0, b) == 0.0);
  CHECK(spectral_density(6.0, b) == doctest::Approx(kPi * 0.01 * 6.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(spectral_density(18.0, b) > spectral_density(18.0 - 1e-3, b));
  CHECK(spectral_density(18.0, b) > spectral_density(18.0 + 1e-3, b));
  for (double w : {0.1, 1.0, 7.5, 40.0}) {
    CHECK(spectral_density(w, b) > 0.0);
    CHECK(spectral_density(-w, b) == -spectral_density(w, b));
  }
}

TEST_CASE("Bose occupation") {
  CHECK(bose_occupation(1.0, 0.5) == doctest::Approx(0.156517642749665651818).epsilon(1e-14));
  for (double w : {0.01, 0.3, 2.0, 9.0}) CHECK(bose_occupation(-w, 0.7) + bose_occupation(w, 0.7) == doctest::Approx(-1.0));
  CHECK(bose_occupation(200.0, 1.0) < 1e-80);
  CHECK_THROWS_AS(bose_occupation(0.0, 1.0), std::domain_error);
}

TEST_CASE("polaron constants") {
  const BathParams weak_l{Side::L, 1e-9, 6.0, 1.5}, weak_r{Side::R, 1e-9, 6.0, 0.5};
  const PolaronConstants w = polaron_constants(weak_l, weak_r);
  CHECK(w.eta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(w.xi < 1e-7);

  const BathParams l{Side::L, 0.01, 6.0, 1.5}, r{Side::R, 0.01, 6.0, 0.5};
  const PolaronConstants c = polaron_constants(l, r);
  CHECK(c.xi == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(c.eta == doctest::Approx(c.per_bath_eta[0] * c.per_bath_eta[1]).epsilon(1e-15));
  CHECK(c.eta < 1.0);

  // T -> 0: eta_v = exp(-alpha/2)
  const BathParams cold{Side::L, 0.3, 6.0, 6.0e-4};
  const PolaronConstants z = polaron_constants(cold, cold);
  CHECK(z.per_bath_eta[0] == doctest::Approx(std::exp(-0.15)).epsilon(1e-7));
}

TEST_CASE("propagator normalization and symmetry") {
  for (double alpha : {0.005, 0.2, 1.0}) {
    for (double t : {0.4, 1.5, 8.0}) {
      const BathParams b{Side::L, alpha, 6.0, t};
      const double tol = 1e-8;
      const PropagatorGrid g = propagator_q(b, tol);
      const PolaronConstants pc = polaron_constants(b, b);
      const double eta_v = pc.per_bath_eta[0];
      CHECK(std::abs(eta_v * eta_v * std::exp(g(0.0)).real() - 1.0) < 2 * tol);
      CHECK(std::abs(g(g.tau_max())) < tol * std::abs(g(0.0)));
      for (double tau : {0.013, 0.4, 3.3, 17.0, g.tau_max() * 1.7}) {
        CHECK(std::abs(g(-tau) - std::conj(g(tau))) == 0.0);
        CHECK(std::abs(propagator_q_exact(b, -tau) - std::conj(propagator_q_exact(b, tau))) < 1e-15 * alpha);
      }
      // interpolation error between nodes
      double worst = 0.0;
      for (size_t i = 0; i + 1 < g.tau_grid.size(); i += 7) {
        const double mid = 0.5 * (g.tau_grid[i] + g.tau_grid[i + 1]);
        worst = std::max(worst, std::abs(g(mid) - propagator_q_exact(b, mid)));
      }
      CHECK(worst < tol * std::abs(g(0.0)));
    }
  }
  CHECK_THROWS(propagator_q(BathParams{Side::L, 0.01, 6.0, 1.0}, 1e-2));
  CHECK_THROWS(propagator_q(BathParams{Side::L, 0.01, 6.0, 1.0}, 1e-13));
}

TEST_CASE("closed-form propagator agrees with direct quadrature") {
  const BathParams b{Side::R, 0.05, 6.0, 0.5};
  for (double tau : {0.0, 0.05, 0.7, 4.0}) {
    const cplx a = propagator_q_exact(b, tau), q = propagator_q_quadrature(b, tau);
    CHECK(std::abs(a - q) < 1e-10 * std::abs(propagator_q_exact(b, 0.0)));
  }
}

TEST_CASE("zero-temperature propagator") {
  const double alpha = 0.1, wc = 6.0;
  const BathParams cold{Side::L, alpha, wc, wc * 1e-4};
  for (double tau : {0.0, 0.03, 0.2, 1.0, 5.0}) {
    const cplx z = propagator_q_zero_temperature(alpha, wc, tau);
    CHECK(std::abs(propagator_q_quadrature(cold, tau) - z) < 1e-6);
    CHECK(std::abs(propagator_q_exact(cold, tau) - z) < 1e-6);
  }
}

TEST_CASE("correlation functions") {
  const BathParams l{Side::L, 0.05, 6.0, 1.5}, r{Side::R, 0.05, 6.0, 0.5};
  const PolaronConstants pc = polaron_constants(l, r);
  const CorrelationFunction corr(l, r, pc, 1.0);
  const PropagatorGrid gl = propagator_q(l), gr = propagator_q(r);
  const double pref = std::pow(pc.eta, 2);
  const cplx q0 = propagator_q_exact(l, 0.0) + propagator_q_exact(r, 0.0);
  CHECK(std::abs(corr(Channel::x, 0.0, Sign::plus, 0.0) - pref * (std::cosh(q0) - 1.0)) < 1e-14);
  CHECK(std::abs(correlation_c(Channel::x, 0.0, Sign::plus, 0.0, gl, gr, pc, 1.0) - pref * (std::cosh(q0) - 1.0)) < 1e-12);
  CHECK(std::abs(corr(Channel::y, 0.0, Sign::plus, 0.0) - pref * std::sinh(q0)) < 1e-14);
  for (Channel a : {Channel::x, Channel::y}) {
    CHECK(std::abs(corr(a, 0.0, Sign::plus, 1e4)) < 1e-10);
    for (double tau : {0.1, 0.9, 6.0}) {
      CHECK(std::abs(corr(a, 0.0, Sign::minus, tau) - std::conj(corr(a, 0.0, Sign::plus, tau))) < 1e-15);
      for (double chi : {0.0, 0.3}) {
        const cplx grid = correlation_c(a, chi, Sign::plus, tau, gl, gr, pc, 1.0);
        CHECK(std::abs(grid - corr(a, chi, Sign::plus, tau)) < 1e-8 * pref);
      }
    }
  }
  // tiny phase: 2 sinh^2(q/2) against the series of cosh q - 1
  const cplx q(1e-6, 3e-7);
  const std::complex<long double> ql(1e-6L, 3e-7L);
  const std::complex<long double> ref = ql * ql / 2.0L + ql * ql * ql * ql / 24.0L;
  const cplx got = corr.from_phase(Channel::x, q) / corr.prefactor();
  CHECK(std::abs(got - cplx(double(ref.real()), double(ref.imag()))) < 1e-12 * std::abs(cplx(double(ref.real()), double(ref.imag()))));
}

TEST_CASE("frequency-domain bath correlation") {
  const BathParams b{Side::L, 0.05, 6.0, 1.5};
  const BathSpectrum s(b);
  // sum rule: (1/2 pi) int C dw = 1, C = 2 pi eta^2 delta + c
  const double span = 40.0 * std::max(b.temperature, b.omega_c);
  const int n = 6001;
  const double h = 2.0 * span / (n - 1);
  double integral = 0.0, lowest = 0.0, peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = -span + i * h;
    const double c = s.continuum(w);
    integral += (i == 0 || i == n - 1 ? 0.5 : 1.0) * h * c;
    lowest = std::min(lowest, c);
    peak = std::max(peak, c);
  }
  CHECK(std::abs(s.eta_squared() + integral / (2.0 * kPi) - 1.0) < 1e-4);
  CHECK(lowest >= -1e-8 * peak);
  for (double w : {0.5, 1.0, 2.0}) {
    const double up = s.continuum(w), down = s.continuum(-w);
    CHECK(std::abs(down - std::exp(-w / b.temperature) * up) < 1e-4 * up);
    CHECK(std::abs(s.continuum_complex(w).imag()) < 1e-8 * up);
  }
  CHECK(niba_spectrum(b, 1.0) == doctest::Approx(s.continuum(1.0)).epsilon(1e-12));
}
