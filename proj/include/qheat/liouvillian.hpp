#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qheat/bath.hpp"
#include "qheat/rates.hpp"
#include "qheat/spin.hpp"

namespace qheat {

enum class Provenance { neptre, redfield, niba };

// Counting-field generator L(chi).  Density matrices are vectorized row-major
// over eigenstate pairs, |rho> index = n * D + n'.  Population chains (NIBA)
// use the populations directly.
struct GeneratorMatrix {
  cplx chi = 0.0;
  int dim = 0;
  CMat matrix;
  Provenance provenance = Provenance::neptre;
};

CVec vectorize(const CMat& rho);
CMat unvectorize(const CVec& v, int d);
CVec identity_vector(int d);  // vectorized identity <I|

// Builds L(chi) for a fixed physical configuration.
class GeneratorFactory {
 public:
  virtual ~GeneratorFactory() = default;
  virtual int dim() const = 0;
  virtual std::vector<GeneratorMatrix> build(const std::vector<cplx>& chis) const = 0;
  GeneratorMatrix build(cplx chi) const { return build(std::vector<cplx>{chi}).front(); }
  // Left zero-mode at chi = 0 (trace functional).
  virtual CVec trace_vector() const = 0;
  // Largest of |Delta|, the temperatures and the transition frequencies; sets
  // the default finite-difference step.
  virtual double energy_scale() const = 0;
};

// D x D tables per channel: gplus[a](n, m) = Gamma^chi_{a,+}(E_nm),
// gminus[a](n, m) = Gamma^chi_{a,-}(E_mn).
struct RateMatrices {
  std::array<CMat, 2> gplus, gminus;
};

RateMatrices rate_matrices(const EigenBasis& basis, const RateTable& table, int chi_index);

// Eigenbasis NE-PTRE generator: gain terms with the chi-dependent rates,
// loss terms and coherent part as at chi = 0.
CMat assemble_neptre(const EigenBasis& basis, const RateMatrices& at_chi, const RateMatrices& at_zero);

GeneratorMatrix build_neptre_generator(const EigenBasis& basis, const RateEngine& rates, cplx chi);

struct NeptreParams {
  int n_qubits = 2;
  double eps = 0.0;
  double delta = 1.0;
  BathParams left{Side::L, 0.001, 6.0, 1.5};
  BathParams right{Side::R, 0.001, 6.0, 0.5};
  RateOptions rates{};
};

class NeptreModel : public GeneratorFactory {
 public:
  explicit NeptreModel(const NeptreParams& p);

  int dim() const override { return basis_.dim() * basis_.dim(); }
  std::vector<GeneratorMatrix> build(const std::vector<cplx>& chis) const override;
  using GeneratorFactory::build;
  CVec trace_vector() const override { return identity_vector(basis_.dim()); }
  double energy_scale() const override;

  const NeptreParams& params() const { return p_; }
  const PolaronConstants& constants() const { return consts_; }
  const SpinOperators& ops() const { return ops_; }
  const EigenBasis& basis() const { return basis_; }
  const RateEngine& engine() const { return engine_; }

 private:
  NeptreParams p_;
  PolaronConstants consts_;
  SpinOperators ops_;
  EigenBasis basis_;
  RateEngine engine_;
  std::vector<double> omegas_;
};

struct DegenerateSteadyState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BranchCrossing : std::runtime_error {
  cplx chi;
  BranchCrossing(const std::string& what, cplx c) : std::runtime_error(what), chi(c) {}
};

// Unique steady state of a chi = 0 generator, normalized with the supplied
// trace functional (defaults to the vectorized identity).  For generators up
// to 400 x 400 the kernel dimension is checked by a full SVD (second-smallest
// singular value below tol * largest means degenerate); larger ones use the
// condition estimate of the bordered system [[L, 1], [<I|, 0]].
CMat steady_state(const GeneratorMatrix& gen, double degeneracy_tol = 1e-8);
CVec steady_state_vector(const GeneratorMatrix& gen, const CVec& trace, double degeneracy_tol = 1e-8);

// rho(t) = exp(L t) rho0 (scaling-and-squaring matrix exponential).
CMat propagate(const CMat& rho0, double t, const GeneratorMatrix& gen);

// Eigenvalue of L(chi) continuously connected to 0 at chi = 0, tracked by
// inverse iteration along the straight path 0 -> chi.
cplx cgf(const GeneratorFactory& factory, cplx chi, int path_steps = 8);

// Tracks the zero branch through an ordered list of generators starting at
// chi = 0; returns Theta at each.  Throws BranchCrossing when consecutive
// eigenvectors lose overlap.
std::vector<cplx> track_zero_branch(const std::vector<GeneratorMatrix>& path, const CVec& trace);

struct CumulantOptions {
  int orders = 3;     // 1..3
  double step = 0.0;  // finite-difference step in chi; 0 selects 0.02 / energy_scale()
};

struct CumulantResult {
  std::array<double, 3> j{0.0, 0.0, 0.0};          // J^(1..3), extrapolated
  std::array<double, 3> error{0.0, 0.0, 0.0};      // |D(h) - D(h/2)| based estimate
  std::array<double, 3> imag_part{0.0, 0.0, 0.0};  // residual imaginary part
  int orders = 3;
  double step_used = 0.0;
  std::vector<std::pair<double, cplx>> samples;  // (chi, Theta)

  double j1() const { return j[0]; }
  double j2() const { return j[1]; }
  double j3() const { return j[2]; }
};

// J^(n) = d^n Theta / d(i chi)^n at chi = 0 from real-chi samples using
// d/d(i chi) = -i d/dchi, central differences at steps h and h/2 combined by
// Richardson extrapolation.
CumulantResult cumulants(const GeneratorFactory& factory, const CumulantOptions& opt = {});

}  // namespace qheat
