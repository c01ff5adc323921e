#include "qheat/spin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qheat {

SpinOperators build_spin_operators(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("build_spin_operators: n_qubits must be >= 1");
  SpinOperators ops;
  ops.n_qubits = n_qubits;
  ops.dim = n_qubits + 1;
  const int d = ops.dim;
  const double j = ops.j();
  ops.jz = CMat::Zero(d, d);
  ops.jplus = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = ops.m(k);
    ops.jz(k, k) = m;
    if (k + 1 < d) ops.jplus(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  ops.jminus = ops.jplus.adjoint();
  ops.jx = 0.5 * (ops.jplus + ops.jminus);
  ops.jy = (ops.jplus - ops.jminus) / cplx(0.0, 2.0);
  return ops;
}

CMat build_polaron_hamiltonian(double eps, double delta, double eta, double xi,
                               const SpinOperators& ops) {
  return eps * ops.jz + (eta * delta) * ops.jx - xi * ops.jz * ops.jz;
}

EigenBasis eigendecompose(const CMat& h, const SpinOperators& ops) {
  const int d = static_cast<int>(h.rows());
  if (h.cols() != d || d != ops.dim) throw std::invalid_argument("eigendecompose: dimension mismatch");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<CMat> solver(h);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigendecompose: eigen-solver failed for dim " << d << ", max|h| " << scale;
    throw std::runtime_error(msg.str());
  }
  const RVec& e = solver.eigenvalues();
  CMat v = solver.eigenvectors();

  std::vector<int> dominant(d);
  for (int c = 0; c < d; ++c) {
    // first index reaching the maximum magnitude (ties broken towards low m)
    const double vmax = v.col(c).cwiseAbs().maxCoeff();
    int k = 0;
    while (std::abs(v(k, c)) < vmax - 1e-12) ++k;
    dominant[c] = k;
    const cplx phase = std::conj(v(k, c)) / std::abs(v(k, c));
    v.col(c) *= phase;
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return e(a) < e(b); });
  // reorder runs of (near-)degenerate levels by dominant Dicke index
  const double tie = 1e-10 * std::max(1.0, e.cwiseAbs().maxCoeff());
  for (int start = 0; start < d;) {
    int end = start + 1;
    while (end < d && e(order[end]) - e(order[end - 1]) <= tie) ++end;
    std::stable_sort(order.begin() + start, order.begin() + end,
                     [&](int a, int b) { return dominant[a] < dominant[b]; });
    start = end;
  }

  EigenBasis basis;
  basis.hamiltonian = h;
  basis.energies.resize(d);
  basis.vectors.resize(d, d);
  for (int c = 0; c < d; ++c) {
    basis.energies(c) = e(order[c]);
    basis.vectors.col(c) = v.col(order[c]);
  }
  const CMat& vv = basis.vectors;
  basis.jx = vv.adjoint() * ops.jx * vv;
  basis.jy = vv.adjoint() * ops.jy * vv;
  basis.jz = vv.adjoint() * ops.jz * vv;
  return basis;
}

}  // namespace qheat
