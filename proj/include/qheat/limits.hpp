#pragma once

#include <utility>
#include <vector>

#include "qheat/liouvillian.hpp"

namespace qheat {

// ---- weak coupling: Redfield equation in the eigenbasis of eps Jz + Delta Jx

struct RedfieldParams {
  int n_qubits = 2;
  double eps = 0.0;
  double delta = 1.0;
  BathParams left{Side::L, 0.001, 6.0, 1.5};
  BathParams right{Side::R, 0.001, 6.0, 0.5};
};

GeneratorMatrix build_redfield_generator(const EigenBasis& basis, const BathParams& left,
                                         const BathParams& right, cplx chi);

class RedfieldModel : public GeneratorFactory {
 public:
  explicit RedfieldModel(const RedfieldParams& p);

  int dim() const override { return basis_.dim() * basis_.dim(); }
  std::vector<GeneratorMatrix> build(const std::vector<cplx>& chis) const override;
  using GeneratorFactory::build;
  CVec trace_vector() const override { return identity_vector(basis_.dim()); }
  double energy_scale() const override;

  const RedfieldParams& params() const { return p_; }
  const EigenBasis& basis() const { return basis_; }
  RVec populations() const;  // steady-state diagonal in the eigenbasis

 private:
  RedfieldParams p_;
  SpinOperators ops_;
  EigenBasis basis_;
};

// Resonant (eps = 0) closed forms at omega = Delta.
struct RedfieldClosedForm {
  double x = 0.0;
  RVec populations;  // P_m, m = -N/2 .. N/2 (ascending energy)
  double i_n = 0.0;
  double j_weak = 0.0;  // printed normalization, see weak_current_analytic
};

RedfieldClosedForm redfield_closed_form(int n_qubits, const BathParams& left, const BathParams& right,
                                        double delta);

// 2 (n_L - n_R) G_L G_R / (G_L + G_R) I_N, as printed.
double weak_current_analytic(int n_qubits, const BathParams& left, const BathParams& right, double delta);
// The N_s = 2 special case exactly as printed:
// 4 (n_L - n_R) G_L G_R / (G_L + G_R) (2 - x)(1 + x^3)/(1 + x + x^2).
double weak_current_ns2_printed(const BathParams& left, const BathParams& right, double delta);
// Closed form with the normalization produced by the Redfield generator
// itself (its first cumulant): Delta/4 times the printed expression.
double weak_current_consistent(int n_qubits, const BathParams& left, const BathParams& right, double delta);

// J = 2 sum_{n,m} E_mn G_R(E_mn)(1 + n_R(E_mn)) |Jz^{nm}|^2 P_m
double weak_current_offresonant(const EigenBasis& basis, const BathParams& right, const RVec& populations);
double weak_current_offresonant(const RedfieldModel& model);

struct SuperradiantCurrent {
  double value = 0.0;
  double validity = 0.0;  // x / ((1 - x) N_s); the closed form needs this >> 1
};

// (1 - x)/(3x) (n_L - n_R) G_L G_R / (G_L + G_R) N_s^2
SuperradiantCurrent superradiant_current(int n_qubits, const BathParams& left, const BathParams& right,
                                         double delta);

// ---- strong coupling: NIBA kinetic chain over Jz eigenstates

struct NibaParams {
  int n_qubits = 2;
  double eps = 0.0;
  double delta = 1.0;
  BathParams left{Side::L, 0.001, 6.0, 1.5};
  BathParams right{Side::R, 0.001, 6.0, 0.5};
  RateOptions rates{};
  bool literal_jplus = false;  // j+_n without the square root
};

struct KineticChain {
  std::vector<double> n_values;  // n = -N/2 .. N/2 - 1 (transition n -> n + 1)
  std::vector<double> gaps;      // Delta_n = eps - xi (2n + 1)
  std::vector<double> jplus2;    // (j+_n)^2
  std::vector<cplx> kappa_plus, kappa_minus;  // at chi = 0
  RVec populations;              // P_n, n = -N/2 .. N/2
};

class NibaModel : public GeneratorFactory {
 public:
  explicit NibaModel(const NibaParams& p);

  int dim() const override { return p_.n_qubits + 1; }
  std::vector<GeneratorMatrix> build(const std::vector<cplx>& chis) const override;
  using GeneratorFactory::build;
  CVec trace_vector() const override { return CVec::Ones(dim()); }
  double energy_scale() const override;

  const NibaParams& params() const { return p_; }
  const PolaronConstants& constants() const { return consts_; }
  const NibaKernel& kernel() const { return kernel_; }

  // kappa^+_n(chi), kappa^-_n(chi) for every transition, [chi][n]
  std::pair<std::vector<std::vector<cplx>>, std::vector<std::vector<cplx>>> rates(
      const std::vector<cplx>& chis) const;
  // d kappa^+-_n / d chi at chi = 0
  std::pair<std::vector<cplx>, std::vector<cplx>> rate_derivatives() const;
  KineticChain chain() const;

  double jplus2(int k) const { return jplus2_[k]; }
  double gap(int k) const { return gaps_[k]; }
  const std::vector<double>& gaps() const { return gaps_; }

 private:
  NibaParams p_;
  PolaronConstants consts_;
  NibaKernel kernel_;
  std::vector<double> gaps_, jplus2_;
};

// (kappa^+_n(chi), kappa^-_n(chi)) for transition index k (n = k - N/2).
std::pair<cplx, cplx> niba_rates(const NibaModel& model, int k, cplx chi);

// Same rates from the frequency-domain convolution
//   kappa^+-_n(chi) = (j+_n Delta)^2/(8 pi) int dw e^{-+ i w chi} C_L(+-w -+ Delta_n) C_R(-+w)
// on a uniform grid of `points` nodes over |w| <= 40 max(T, w_c, |xi|).
struct ConvolutionOptions {
  int points = 1 << 14;
  double span_factor = 40.0;
};
std::pair<cplx, cplx> niba_rates_convolution(const NibaModel& model, int k, cplx chi,
                                             const ConvolutionOptions& opt = {});

// Closed-form N_s = 2 CGF
//   Theta = [sqrt((2k+ - k-)^2 + 8 k+(chi) k-(chi)) - (2k+ + k-)]/2
// with k+- = kappa^+-_0 at chi = 0.
cplx niba_cgf_ns2(cplx kp0, cplx km0, cplx kp_chi, cplx km_chi);
cplx niba_cgf_ns2(const NibaModel& model, cplx chi);

// Strong-coupling current for N_s = 2, eps = 0 from the weighted integral form
//   J = Delta^2/(2 pi) int dw w [w1 C_R(w) C_L(xi - w) - w2 C_R(-w) C_L(w - xi)]
// evaluated in the time domain.
double niba_current_ns2(const NibaModel& model);

// J = sum_n (j+_n Delta)^2/(8 pi) int [C_L(Delta_n - w) C_R(w) P_{n+1} - C_L(w - Delta_n) C_R(-w) P_n] w dw
double niba_current_general(const NibaModel& model);
double niba_current_convolution(const NibaModel& model, const ConvolutionOptions& opt = {});

}  // namespace qheat
