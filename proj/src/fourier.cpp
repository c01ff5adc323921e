#include "qheat/fourier.hpp"

#include <cmath>
#include <stdexcept>

#include "qheat/special.hpp"

namespace qheat {

TauGrid TauGrid::graded(double h0, double growth, double tau_max, int block_len) {
  if (!(h0 > 0.0) || !(growth > 0.0) || !(tau_max > h0))
    throw std::invalid_argument("TauGrid::graded: invalid parameters");
  TauGrid g;
  g.nodes.push_back(0.0);
  auto add_block = [&](double h, int count) {
    Block b{static_cast<int>(g.nodes.size()) - 1, count, h};
    const double start = g.nodes.back();
    for (int i = 1; i <= count; ++i) g.nodes.push_back(start + i * h);
    g.blocks.push_back(b);
  };
  const int n_start = static_cast<int>(std::ceil(1.0 / growth));
  add_block(h0, n_start);
  while (g.nodes.back() < tau_max) add_block(std::max(h0, growth * g.nodes.back()), block_len);
  return g;
}

namespace {

// M_k = int_0^1 u^k e^{-i theta u} du, k = 0..3
void moments(double theta, cplx m[4]) {
  if (std::abs(theta) < 0.5) {
    cplx term = 1.0;  // (-i theta)^j / j!
    for (int k = 0; k < 4; ++k) m[k] = 0.0;
    for (int j = 0; j < 30; ++j) {
      for (int k = 0; k < 4; ++k) m[k] += term / double(j + k + 1);
      term *= cplx(0.0, -theta) / double(j + 1);
      if (std::abs(term) < 1e-18) break;
    }
    return;
  }
  const cplx e = std::exp(cplx(0.0, -theta));
  const cplx inv = 1.0 / cplx(0.0, theta);
  m[0] = (1.0 - e) * inv;
  for (int k = 1; k < 4; ++k) m[k] = (double(k) * m[k - 1] - e) * inv;
}

}  // namespace

cplx power_tail_integral(int n, double w, double tau_max) {
  return std::pow(tau_max, 1 - n) * expint_en(n, cplx(0.0, w * tau_max));
}

void half_transform(const TauGrid& grid, const HalfLineBatch& batch, double w, cplx* out) {
  const int nf = batch.nf;
  std::vector<cplx> s0(nf), s1(nf), s2(nf), s3(nf);
  for (const auto& blk : grid.blocks) {
    const double h = blk.h;
    cplx m[4];
    moments(w * h, m);
    const cplx w00 = h * (m[0] - 3.0 * m[2] + 2.0 * m[3]);
    const cplx w10 = h * h * (m[1] - 2.0 * m[2] + m[3]);
    const cplx w01 = h * (3.0 * m[2] - 2.0 * m[3]);
    const cplx w11 = h * h * (m[3] - m[2]);
    const cplx step = std::exp(cplx(0.0, -w * h));
    cplx p = std::exp(cplx(0.0, -w * grid.nodes[blk.first]));
    std::fill(s0.begin(), s0.end(), 0.0);
    std::fill(s1.begin(), s1.end(), 0.0);
    std::fill(s2.begin(), s2.end(), 0.0);
    std::fill(s3.begin(), s3.end(), 0.0);
    const cplx* f = batch.f.data() + size_t(blk.first) * nf;
    const cplx* df = batch.df.data() + size_t(blk.first) * nf;
    for (int i = 0; i < blk.count; ++i) {
      for (int k = 0; k < nf; ++k) {
        s0[k] += p * f[k];
        s1[k] += p * df[k];
        s2[k] += p * f[k + nf];
        s3[k] += p * df[k + nf];
      }
      f += nf;
      df += nf;
      p *= step;
    }
    for (int k = 0; k < nf; ++k) out[k] += w00 * s0[k] + w10 * s1[k] + w01 * s2[k] + w11 * s3[k];
  }
  // tail: f ~ a/s^2 + b/s^3 matched at tau_max
  const double tm = grid.tau_max();
  const cplx t2 = power_tail_integral(2, w, tm);
  const cplx t3 = power_tail_integral(3, w, tm);
  const size_t last = size_t(grid.size() - 1) * nf;
  for (int k = 0; k < nf; ++k) {
    const cplx fv = batch.f[last + k], dv = batch.df[last + k];
    const cplx a = dv * tm * tm * tm + 3.0 * fv * tm * tm;
    const cplx b = -2.0 * fv * tm * tm * tm - dv * tm * tm * tm * tm;
    out[k] += a * t2 + b * t3;
  }
}

}  // namespace qheat
