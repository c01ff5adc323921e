#include "qheat/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qheat {

namespace {

// Bernoulli numbers B_2, B_4, ..., B_20.
constexpr double kBernoulli[] = {1.0 / 6.0,       -1.0 / 30.0,  1.0 / 42.0,
                                 -1.0 / 30.0,     5.0 / 66.0,   -691.0 / 2730.0,
                                 7.0 / 6.0,       -3617.0 / 510.0,
                                 43867.0 / 798.0, -174611.0 / 330.0};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

cplx polygamma(int k, cplx z) {
  if (k < 1 || k > 3) throw std::invalid_argument("polygamma: order must be 1..3");
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k+1}
  const double kfact = factorial(k);
  cplx acc = 0.0;
  // Shift the argument right until the asymptotic series is accurate.
  while (z.real() < 16.0) {
    if (std::abs(z) < 1e-300) throw std::domain_error("polygamma: pole at non-positive integer");
    acc += sign * kfact / std::pow(z, k + 1);
    z += 1.0;
  }
  const cplx iz = 1.0 / z;
  const cplx iz2 = iz * iz;
  // (k-1)!/z^k + k!/(2 z^{k+1}) + sum_j B_2j (2j+k-1)!/((2j)! z^{2j+k})
  cplx series = factorial(k - 1) * std::pow(iz, k) + 0.5 * kfact * std::pow(iz, k + 1);
  cplx p = std::pow(iz, k) * iz2;
  for (int j = 1; j <= 10; ++j) {
    series += kBernoulli[j - 1] * factorial(2 * j + k - 1) / factorial(2 * j) * p;
    p *= iz2;
  }
  return acc + sign * series;
}

cplx expint_en(int n, cplx z) {
  if (n < 1) throw std::invalid_argument("expint_en: n must be >= 1");
  const double az = std::abs(z);
  if (az == 0.0) {
    if (n == 1) throw std::domain_error("expint_en: E_1(0) diverges");
    return 1.0 / (n - 1.0);
  }
  constexpr double kEuler = 0.57721566490153286061;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (az > 1.0) {
    // Continued fraction (modified Lentz).
    cplx b = z + double(n);
    cplx c = 1.0 / 1e-300;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 20000; ++i) {
      const double an = -double(i) * (n - 1 + i);
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const cplx del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < 4 * eps) return h * std::exp(-z);
    }
    throw std::runtime_error("expint_en: continued fraction did not converge");
  }
  // Power series.
  cplx ans = (n - 1 != 0) ? cplx(1.0 / (n - 1)) : cplx(-std::log(z) - kEuler);
  cplx fact = 1.0;
  for (int i = 1; i < 1000; ++i) {
    fact *= -z / double(i);
    cplx del;
    if (i != n - 1) {
      del = -fact / double(i - n + 1);
    } else {
      double psi = -kEuler;
      for (int ii = 1; ii <= n - 1; ++ii) psi += 1.0 / ii;
      del = fact * (-std::log(z) + psi);
    }
    ans += del;
    if (std::abs(del) < std::abs(ans) * eps) return ans;
  }
  throw std::runtime_error("expint_en: series did not converge");
}

}  // namespace qheat
