#pragma once

#include "qheat/types.hpp"

namespace qheat {

// Collective spin operators J_a = sum_i sigma^i_a / 2 restricted to the
// symmetric (Dicke) subspace j = N_s/2.  Basis index k = 0..N_s holds
// |j, m> with m = -j + k, i.e. m ascending.
struct SpinOperators {
  int n_qubits = 0;
  int dim = 0;
  CMat jx, jy, jz, jplus, jminus;

  double j() const { return 0.5 * n_qubits; }
  double m(int k) const { return -j() + k; }
};

SpinOperators build_spin_operators(int n_qubits);

// H' = eps Jz + eta delta Jx - xi Jz^2
CMat build_polaron_hamiltonian(double eps, double delta, double eta, double xi,
                               const SpinOperators& ops);

// Eigenstates sorted by ascending energy.  Ties (within 1e-10 of the spectral
// scale) are ordered by the Dicke index of the largest-magnitude component;
// every column is phased so that this component is real and positive.
struct EigenBasis {
  CMat hamiltonian;
  RVec energies;
  CMat vectors;
  CMat jx, jy, jz;  // V^dagger J_a V

  int dim() const { return static_cast<int>(energies.size()); }
  double gap(int n, int m) const { return energies(n) - energies(m); }
};

EigenBasis eigendecompose(const CMat& h, const SpinOperators& ops);

}  // namespace qheat
