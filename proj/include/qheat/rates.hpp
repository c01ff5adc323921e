#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qheat/bath.hpp"
#include "qheat/fourier.hpp"

namespace qheat {

enum class Channel { x = 0, y = 1 };
enum class Sign { plus, minus };

struct RateOptions {
  double tol = 1e-7;      // target relative accuracy; sets the time-grid density
  double tau_tol = 1e-8;  // grid ends where |Q(tau_max)| < tau_tol |Q(0)|
  bool drop_lamb_shift = false;
};

// Time grid shared by all transforms for a pair of baths.
TauGrid make_tau_grid(const BathParams& left, const BathParams& right, double tol, double tau_tol);

// Counting-field correlation functions
//   C_x(chi, tau) = (eta Delta)^2 [cosh q - 1] = (eta Delta)^2 2 sinh^2(q/2)
//   C_y(chi, tau) = (eta Delta)^2 sinh q,      q = Q_L(tau) + Q_R(tau - chi)
// with Q from the closed form, so tau and chi may be complex inside the strip.
class CorrelationFunction {
 public:
  CorrelationFunction(const BathParams& left, const BathParams& right,
                      const PolaronConstants& consts, double delta);

  const BathParams& left() const { return left_; }
  const BathParams& right() const { return right_; }
  const PolaronConstants& constants() const { return consts_; }
  double delta() const { return delta_; }
  double prefactor() const { return pref_; }  // (eta Delta)^2

  cplx phase(cplx chi, cplx tau) const;
  cplx phase_dot(cplx chi, cplx tau) const;
  cplx from_phase(Channel a, cplx q) const;
  cplx from_phase_dot(Channel a, cplx q, cplx qdot) const;

  // C_a(chi, +tau) or C_a(chi, -tau) for real tau
  cplx operator()(Channel a, cplx chi, Sign s, double tau) const;

  // Largest downward contour shift y for which tau - i y stays inside the
  // analyticity strip of q(chi, .) (with a safety factor 0.75).  Throws if
  // chi itself lies outside the strip.
  double contour_shift(cplx chi) const;

 private:
  BathParams left_, right_;
  PolaronConstants consts_;
  double delta_;
  double pref_;
};

// Same function evaluated from tabulated propagators (real chi, real tau).
cplx correlation_c(Channel a, double chi, Sign s, double tau, const PropagatorGrid& left,
                   const PropagatorGrid& right, const PolaronConstants& consts, double delta);

// Half-Fourier rates
//   Gamma^chi_{a,+}(w) = int_0^inf C_a(chi, +tau) e^{-i w tau} dtau
//   Gamma^chi_{a,-}(w) = int_0^inf C_a(chi, -tau) e^{-i w tau} dtau
// For each frequency the engine stores gplus(w) = Gamma_+(w) and
// gback(w) = Gamma_-(-w).  Their sum is the full-line transform S(w), which for
// w > 0 (the thermally suppressed side) is evaluated on the contour
// Im tau = -y so that exponentially small values keep their relative accuracy.
struct RateTable {
  std::vector<double> omegas;
  std::vector<cplx> chis;
  // [chi][channel][omega]
  std::vector<std::array<std::vector<cplx>, 2>> gplus, gback;
};

class RateEngine {
 public:
  RateEngine(CorrelationFunction corr, RateOptions opt = {});

  const CorrelationFunction& correlation() const { return corr_; }
  const RateOptions& options() const { return opt_; }
  const TauGrid& grid() const { return grid_; }

  RateTable tables(const std::vector<double>& omegas, const std::vector<cplx>& chis) const;
  cplx gamma(Channel a, cplx chi, Sign s, double omega) const;

 private:
  CorrelationFunction corr_;
  RateOptions opt_;
  TauGrid grid_;
};

// Single-point convenience wrapper over RateEngine.
cplx rate_gamma(Channel a, cplx chi, Sign s, double omega, const RateEngine& engine);

// Frequency-domain bath correlation C_v(w) = int dt e^{iwt} eta_v^2 e^{Q_v(t)}
//   = 2 pi eta_v^2 delta(w) + c_v(w).
// continuum() returns the regular part c_v(w); delta_weight() = 2 pi eta_v^2.
class BathSpectrum {
 public:
  explicit BathSpectrum(const BathParams& bath, RateOptions opt = {});
  double delta_weight() const { return 2.0 * kPi * eta2_; }
  double eta_squared() const { return eta2_; }
  cplx continuum_complex(double omega) const;
  double continuum(double omega) const { return continuum_complex(omega).real(); }
  std::vector<double> continuum(const std::vector<double>& omegas) const;
  // columns: omega, re, im
  void dump_csv(std::ostream& os, const std::vector<double>& omegas) const;

 private:
  BathParams bath_;
  double eta2_;
  TauGrid grid_;
  double shift_;
  HalfLineBatch real_pos_, real_neg_, shifted_pos_, shifted_neg_;
};

double niba_spectrum(const BathParams& bath, double omega);

// Full-line transforms of the NIBA kernel
//   K_chi(t) = eta^2 (exp[Q_L(t) + Q_R(t - chi)] - 1)
//   Y(nu, chi)  = int dt e^{-i nu t} K_chi(t)
//   dY(nu, chi) = d/dchi Y(nu, chi)
// so that kappa^+_n(chi) = (j+_n Delta)^2/4 Y(Delta_n, chi) and
// kappa^-_n(chi) = (j+_n Delta)^2/4 Y(-Delta_n, chi).
class NibaKernel {
 public:
  NibaKernel(const BathParams& left, const BathParams& right, const PolaronConstants& consts,
             RateOptions opt = {});
  // result[chi][nu]
  std::vector<std::vector<cplx>> transform(const std::vector<double>& nus,
                                           const std::vector<cplx>& chis) const;
  std::vector<cplx> transform_dchi(const std::vector<double>& nus, cplx chi) const;

 private:
  std::vector<std::vector<cplx>> run(const std::vector<double>& nus, const std::vector<cplx>& chis,
                                     bool derivative) const;
  BathParams left_, right_;
  PolaronConstants consts_;
  RateOptions opt_;
  TauGrid grid_;
};

}  // namespace qheat
