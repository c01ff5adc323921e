#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qheat/limits.hpp"
#include "qheat/sweep.hpp"

using namespace qheat;

TEST_CASE("sweep specifications") {
  const SweepRange a = parse_sweep("alpha=0.001:1:4:log");
  CHECK(a.var == SweepVar::alpha);
  CHECK(a.log);
  const auto v = a.values();
  REQUIRE(v.size() == 4);
  CHECK(v[0] == 0.001);
  CHECK(v[1] == doctest::Approx(0.01));
  CHECK(v[3] == 1.0);
  const SweepRange n = parse_sweep("n_qubits=2:16:8");
  CHECK(n.var == SweepVar::n_qubits);
  CHECK(n.values()[1] == doctest::Approx(4.0));
  CHECK(parse_sweep("eps=0:1:1").values() == std::vector<double>{0.0});
  CHECK(parse_sweep("delta_t=0.5:7.6:3:lin").values().back() == 7.6);
  for (const char* bad : {"alpha", "alpha=1:2", "beta=1:2:3", "alpha=0:1:3:log", "alpha=1:2:0", "alpha=1:2:2.5",
                          "alpha=1:x:3", "alpha=1:2:3:cubic"})
    CHECK_THROWS_AS(parse_sweep(bad), ConfigError);
}

TEST_CASE("config validation") {
  SweepConfig c;
  CHECK_NOTHROW(c.validate());
  c.t_left = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SweepConfig{};
  c.sweep = parse_sweep("delta_t=-2:1:3");
  CHECK_THROWS_AS(c.validate(), ConfigError);  // T_L = T_R + dT <= 0
  c = SweepConfig{};
  c.sweep = parse_sweep("n_qubits=1:4:3");
  CHECK_THROWS_AS(c.validate(), ConfigError);  // 2.5
  c = SweepConfig{};
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SweepConfig{};
  c.cumulant_orders = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config files") {
  const SweepConfig c = config_from_json(R"({"method": "all", "ns": 3, "alpha": 0.02, "tl": 2.0,
                                             "sweep": "eps=0:1:3", "drop_lamb_shift": true})");
  CHECK(c.method == Method::all);
  CHECK(c.n_qubits == 3);
  CHECK(c.alpha_l == 0.02);
  CHECK(c.alpha_r == 0.02);
  CHECK(c.t_left == 2.0);
  CHECK(c.t_right == 0.5);
  CHECK(c.rates.drop_lamb_shift);
  REQUIRE(c.sweep.has_value());
  CHECK(c.sweep->var == SweepVar::eps);
  CHECK_THROWS_AS(config_from_json(R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"ns": "two"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
}

TEST_CASE("single point gives one row") {
  SweepConfig c;
  c.sweep = parse_sweep("alpha=0.01:0.01:1");
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ok());
  CHECK(rows[0].alpha_l == 0.01);
  CHECK(rows[0].j[0] > 0.0);
}

TEST_CASE("coupling sweep with every method") {
  SweepConfig c;
  c.method = Method::all;
  c.sweep = parse_sweep("alpha=0.001:1:3:log");
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 9);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].method == std::vector<std::string>{"neptre", "redfield", "niba"}[i % 3]);
    CHECK(rows[i].ok());
    CHECK(std::isfinite(rows[i].j[0]));
  }
  CHECK(rows[0].alpha_l == 0.001);
  CHECK(rows[8].alpha_l == 1.0);
  // same code path as the direct calls
  RedfieldParams rp;
  rp.left.alpha = rp.right.alpha = 1.0;
  const CumulantResult r = cumulants(RedfieldModel(rp));
  CHECK(rows[7].j[0] == r.j[0]);
  CHECK(rows[7].j[2] == r.j[2]);
  NibaParams np;
  np.left.alpha = np.right.alpha = 1.0;
  const CumulantResult n = cumulants(NibaModel(np));
  CHECK(rows[8].j[0] == n.j[0]);
  CHECK(rows[8].j[1] == n.j[1]);
}

TEST_CASE("equilibrium sweep carries no current") {
  SweepConfig c;
  c.method = Method::all;
  c.t_left = c.t_right = 1.0;
  c.rates.drop_lamb_shift = true;  // see the O(alpha^2) test for the full rates
  c.sweep = parse_sweep("alpha=0.001:0.1:2:log");
  for (const auto& r : run_sweep(c)) {
    CHECK(r.ok());
    CHECK(std::abs(r.j[0]) < 1e-10);
  }
}

TEST_CASE("output is deterministic and independent of the thread count") {
  SweepConfig c;
  c.method = Method::all;
  c.sweep = parse_sweep("eps=0:1:3");
  c.threads = 1;
  std::ostringstream a, b, j1, j2;
  write_csv(a, run_sweep(c));
  c.threads = 3;
  const auto rows = run_sweep(c);
  write_csv(b, rows);
  CHECK(a.str() == b.str());
  write_json(j1, rows);
  write_json(j2, run_sweep(c));
  CHECK(j1.str() == j2.str());
  CHECK(a.str().substr(0, a.str().find('\n')) == kCsvColumns);
}

TEST_CASE("failed points are kept in their row") {
  SweepConfig c;
  c.method = Method::niba;
  c.alpha_l = c.alpha_r = 0.01;
  c.eps = 0.24;  // equals xi: zero gap in the NIBA chain
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].ok());
  CHECK(rows[0].status.rfind("error: ", 0) == 0);
  CHECK(std::isnan(rows[0].j[0]));
  std::ostringstream os;
  write_csv(os, rows);
  CHECK(os.str().find(",nan,") != std::string::npos);
}

TEST_CASE("scaling exponent fit") {
  std::vector<std::pair<double, double>> sq, flat, noisy;
  for (int n = 2; n <= 16; n += 2) {
    sq.emplace_back(n, 0.37 * n * n);
    flat.emplace_back(n, 5.0);
    noisy.emplace_back(n, n * n * (1.0 + 0.05 * ((n / 2) % 2 ? 1 : -1)));
  }
  CHECK(std::abs(fit_scaling_exponent(sq).gamma - 2.0) < 1e-12);
  CHECK(fit_scaling_exponent(sq).std_error < 1e-12);
  CHECK(std::abs(fit_scaling_exponent(flat).gamma) < 1e-12);
  const ScalingFit f = fit_scaling_exponent(noisy);
  CHECK(std::abs(f.gamma - 2.0) < 3.0 * f.std_error + 0.05);
  CHECK(f.std_error > 0.0);
  CHECK_THROWS(fit_scaling_exponent({{2, 1.0}, {4, 2.0}}));
  CHECK_THROWS(fit_scaling_exponent({{2, 1.0}, {4, -2.0}, {6, 3.0}}));
  CHECK_THROWS(fit_scaling_exponent({{2, 1.0}, {4, 0.0}, {6, 3.0}}));
}
