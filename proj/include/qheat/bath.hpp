#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "qheat/types.hpp"

namespace qheat {

enum class Side { L, R };

// Super-Ohmic bath G(w) = pi alpha w^3 / wc^2 exp(-|w|/wc) at temperature T.
struct BathParams {
  Side side = Side::L;
  double alpha = 0.0;
  double omega_c = 1.0;
  double temperature = 1.0;

  void validate() const;  // throws std::invalid_argument
};

double spectral_density(double omega, const BathParams& bath);
double bose_occupation(double omega, double temperature);  // omega == 0 throws std::domain_error

struct PolaronConstants {
  double eta = 1.0;
  double xi = 0.0;
  std::array<double, 2> per_bath_eta{1.0, 1.0};  // [L, R]
  double quad_error = 0.0;                       // largest reported quadrature error
};

PolaronConstants polaron_constants(const BathParams& left, const BathParams& right,
                                   double tol = 1e-12);

// Phonon propagator Q(tau) = (1/pi) int_0^inf G/w^2 [coth(w/2T) cos(w tau) - i sin(w tau)],
// evaluated through the trigamma closed form
//   Q(tau) = alpha (T/wc)^2 [psi'(T/wc + i T tau) + psi'(1 + T/wc - i T tau)],
// which also continues Q analytically into the strip -(1/wc + 1/T) < Im tau < 1/wc.
cplx propagator_q_exact(const BathParams& bath, cplx tau);
cplx propagator_q_dot(const BathParams& bath, cplx tau);   // dQ/dtau
cplx propagator_q_ddot(const BathParams& bath, cplx tau);  // d2Q/dtau2
// Direct adaptive quadrature of the defining integral (oracle, real tau).
cplx propagator_q_quadrature(const BathParams& bath, double tau, double tol = 1e-12);
// T = 0 closed form alpha / (1 + i wc tau)^2.
cplx propagator_q_zero_temperature(double alpha, double omega_c, double tau);

// Tabulated propagator with cubic Hermite interpolation and a/tau^2 + b/tau^3
// tail beyond tau_max.
struct PropagatorGrid {
  BathParams bath;
  std::vector<double> tau_grid;
  std::vector<cplx> q_values;
  std::vector<cplx> q_derivs;
  cplx tail_a = 0.0, tail_b = 0.0;
  double tol = 1e-8;

  double tau_max() const { return tau_grid.back(); }
  cplx operator()(double tau) const;
  // columns: tau, re, im
  void dump_csv(std::ostream& os) const;
};

PropagatorGrid propagator_q(const BathParams& bath, double tol = 1e-8);

}  // namespace qheat
