#pragma once

#include <vector>

#include "qheat/types.hpp"

namespace qheat {

// Half-line grid [0, tau_max] made of blocks of equal spacing: a uniform
// start of step h0 followed by blocks whose step grows with tau (h ~ growth * tau).
struct TauGrid {
  struct Block {
    int first;  // index of the first node of the block
    int count;  // number of intervals
    double h;
  };
  std::vector<double> nodes;
  std::vector<Block> blocks;

  double tau_max() const { return nodes.back(); }
  int size() const { return static_cast<int>(nodes.size()); }

  static TauGrid graded(double h0, double growth, double tau_max, int block_len = 32);
};

// Samples of nf functions on a TauGrid, node-major: value(i, k) = f[i * nf + k].
struct HalfLineBatch {
  int nf = 0;
  std::vector<cplx> f, df;  // values and derivatives along the half line

  HalfLineBatch(int n_nodes, int n_functions)
      : nf(n_functions), f(size_t(n_nodes) * n_functions), df(size_t(n_nodes) * n_functions) {}
  cplx& value(int i, int k) { return f[size_t(i) * nf + k]; }
  cplx& deriv(int i, int k) { return df[size_t(i) * nf + k]; }
};

// out[k] += int_0^inf f_k(s) e^{-i w s} ds: exact integration of the oscillatory
// factor against the cubic Hermite interpolant of f_k (Filon type), plus the
// tail beyond tau_max modelled as a/s^2 + b/s^3 matched to value and slope.
void half_transform(const TauGrid& grid, const HalfLineBatch& batch, double w, cplx* out);

// int_{tau_max}^inf s^{-n} e^{-i w s} ds
cplx power_tail_integral(int n, double w, double tau_max);

}  // namespace qheat
