#include <doctest.h>

#include "oracle.hpp"
#include "qheat/rates.hpp"

using namespace qheat;

namespace {

struct Reference {
  BathParams l{Side::L, 0.005, 6.0, 1.5}, r{Side::R, 0.005, 6.0, 0.5};
  PolaronConstants pc = polaron_constants(l, r);
  CorrelationFunction corr{l, r, pc, 1.0};
};

}  // namespace

TEST_CASE("rates agree with an independent Fourier quadrature") {
  for (double alpha : {0.005, 0.5}) {
    const BathParams l{Side::L, alpha, 6.0, 1.5}, r{Side::R, alpha, 6.0, 0.5};
    const CorrelationFunction corr(l, r, polaron_constants(l, r), 1.0);
    const RateEngine engine(corr);
    for (Channel a : {Channel::x, Channel::y})
      for (Sign s : {Sign::plus, Sign::minus})
        for (double chi : {0.0, 0.3})
          for (double w : {-2.0, -1.0, 1.0, 3.0}) {
            CAPTURE(alpha);
            CAPTURE(chi);
            CAPTURE(w);
            const cplx g = rate_gamma(a, chi, s, w, engine);
            const cplx o = oracle::half_fourier(corr, a, chi, s, w);
            CHECK(std::abs(g - o) < 1e-7 * std::abs(o));
          }
  }
}

TEST_CASE("conjugation relation at zero counting field") {
  Reference f;
  const RateEngine engine(f.corr);
  for (Channel a : {Channel::x, Channel::y})
    for (double w : {1.0, -1.0}) {
      const cplx minus = engine.gamma(a, 0.0, Sign::minus, w);
      const cplx plus = engine.gamma(a, 0.0, Sign::plus, -w);
      CHECK(std::abs(minus - std::conj(plus)) < 1e-9 * std::abs(plus));
    }
}

TEST_CASE("absorption-side rate is positive at the reference parameters") {
  Reference f;
  const RateEngine engine(f.corr);
  CHECK(engine.gamma(Channel::y, 0.0, Sign::plus, -1.0).real() > 0.0);
  CHECK(oracle::half_fourier(f.corr, Channel::y, 0.0, Sign::plus, -1.0).real() > 0.0);
}

TEST_CASE("rate tables match single evaluations") {
  Reference f;
  const RateEngine engine(f.corr);
  const std::vector<double> ws = {-1.5, 0.0, 0.5, 2.0};
  const std::vector<cplx> chis = {0.0, 0.05, -0.1};
  const RateTable t = engine.tables(ws, chis);
  for (size_t c = 0; c < chis.size(); ++c)
    for (int a = 0; a < 2; ++a)
      for (size_t k = 0; k < ws.size(); ++k) {
        const Channel ch = a == 0 ? Channel::x : Channel::y;
        CHECK(std::abs(t.gplus[c][a][k] - engine.gamma(ch, chis[c], Sign::plus, ws[k])) < 1e-14);
        CHECK(std::abs(t.gback[c][a][k] - engine.gamma(ch, chis[c], Sign::minus, -ws[k])) < 1e-14);
      }
}

TEST_CASE("dropping the Lamb shift keeps the full-line part only") {
  Reference f;
  RateOptions opt;
  opt.drop_lamb_shift = true;
  const RateEngine plain(f.corr), dropped(f.corr, opt);
  for (double w : {-1.0, 1.0}) {
    const cplx s = plain.gamma(Channel::y, 0.0, Sign::plus, w) + plain.gamma(Channel::y, 0.0, Sign::minus, -w);
    CHECK(std::abs(dropped.gamma(Channel::y, 0.0, Sign::plus, w) - 0.5 * s) < 1e-14);
    CHECK(std::abs(s.imag()) < 1e-9 * std::abs(s));
  }
}

TEST_CASE("counting field outside the analyticity strip is rejected") {
  Reference f;
  CHECK_NOTHROW(f.corr.contour_shift(cplx(0.0, 1.3)));
  CHECK_THROWS_AS(f.corr.contour_shift(cplx(0.0, 5.0)), std::domain_error);
  CHECK_THROWS_AS(f.corr.contour_shift(cplx(0.0, -1.0)), std::domain_error);
}

TEST_CASE("half-line transform of a known function") {
  // int_0^inf e^{-s} e^{-i w s} ds = 1/(1 + i w)
  const TauGrid g = TauGrid::graded(0.005, 0.004, 60.0);
  HalfLineBatch b(g.size(), 1);
  for (int i = 0; i < g.size(); ++i) {
    b.value(i, 0) = std::exp(-g.nodes[i]);
    b.deriv(i, 0) = -std::exp(-g.nodes[i]);
  }
  for (double w : {0.0, 0.7, -3.0, 25.0}) {
    cplx out = 0.0;
    half_transform(g, b, w, &out);
    CHECK(std::abs(out - 1.0 / cplx(1.0, w)) < 1e-9);
  }
}
