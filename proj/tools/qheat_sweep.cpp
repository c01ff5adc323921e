// Parameter sweeps of heat-current cumulants for N_s qubits between two baths.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qheat/sweep.hpp"

using namespace qheat;

int main(int argc, char** argv) {
  CLI::App app{"Heat-current cumulants of a collective-qubit junction (NE-PTRE, Redfield, NIBA)"};
  app.footer(std::string("CSV columns: ") + kCsvColumns +
             "\nFailed points keep their row with status 'error: ...' and nan values."
             "\nExit codes: 0 success, 1 configuration error, 2 every point failed.");

  std::optional<std::string> method, sweep, out, format, config_path;
  std::optional<int> ns, orders, threads;
  std::optional<double> eps, delta, alpha, alpha_l, alpha_r, wc, tl, tr, tol_rate, tol_tau, step;
  bool drop_lamb = false, fit = false;

  app.add_option("--method", method, "neptre | redfield | niba | all (default neptre)");
  app.add_option("--ns", ns, "number of qubits N_s (default 2)");
  app.add_option("--eps", eps, "qubit bias (default 0)");
  app.add_option("--delta", delta, "tunneling Delta (default 1)");
  app.add_option("--alpha", alpha, "coupling for both baths (default 0.001)");
  app.add_option("--alpha-l", alpha_l, "left-bath coupling");
  app.add_option("--alpha-r", alpha_r, "right-bath coupling");
  app.add_option("--wc", wc, "bath cutoff omega_c (default 6)");
  app.add_option("--tl", tl, "left temperature (default 1.5)");
  app.add_option("--tr", tr, "right temperature (default 0.5)");
  app.add_option("--sweep", sweep, "VAR=START:STOP:N[:log], VAR in alpha, delta_t, n_qubits, eps");
  app.add_option("--cumulants", orders, "number of cumulants 1..3 (default 3)");
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format, "csv | json (default csv)");
  app.add_option("--config", config_path, "flat JSON config; command-line flags take precedence");
  app.add_option("--tol-rate", tol_rate, "rate quadrature tolerance (default 1e-7)");
  app.add_option("--tol-tau", tol_tau, "propagator decay cut for the time grid (default 1e-8)");
  app.add_option("--step", step, "counting-field step for the cumulants (default 0.02 / max(Delta, T_L, T_R, largest gap))");
  app.add_option("--threads", threads, "worker threads (default: hardware concurrency)");
  app.add_flag("--drop-lamb-shift", drop_lamb, "zero the imaginary parts of the NE-PTRE rates");
  app.add_flag("--fit", fit, "with an n_qubits sweep, print the fitted exponent of J1 ~ N_s^gamma to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  SweepConfig cfg;
  std::vector<ResultRow> rows;
  try {
    if (config_path) {
      std::ifstream in(*config_path);
      if (!in) throw ConfigError("cannot read config file " + *config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = config_from_json(ss.str(), cfg);
    }
    if (method) cfg.method = parse_method(*method);
    if (ns) cfg.n_qubits = *ns;
    if (eps) cfg.eps = *eps;
    if (delta) cfg.delta = *delta;
    if (alpha) cfg.alpha_l = cfg.alpha_r = *alpha;
    if (alpha_l) cfg.alpha_l = *alpha_l;
    if (alpha_r) cfg.alpha_r = *alpha_r;
    if (wc) cfg.omega_c = *wc;
    if (tl) cfg.t_left = *tl;
    if (tr) cfg.t_right = *tr;
    if (sweep) cfg.sweep = parse_sweep(*sweep);
    if (orders) cfg.cumulant_orders = *orders;
    if (out) cfg.out_path = *out;
    if (format) cfg.format = *format;
    if (tol_rate) cfg.rates.tol = *tol_rate;
    if (tol_tau) cfg.rates.tau_tol = *tol_tau;
    if (step) cfg.step = *step;
    if (threads) cfg.threads = *threads;
    if (drop_lamb) cfg.rates.drop_lamb_shift = true;
    cfg.validate();
    rows = run_sweep(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      std::cerr << "config error: cannot write " << cfg.out_path << '\n';
      return 1;
    }
    os = &file;
  }
  if (cfg.format == "json") write_json(*os, rows);
  else write_csv(*os, rows);

  size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.ok()) {
      ++failed;
      std::cerr << r.method << " ns=" << r.ns << ": " << r.status << '\n';
    }
  }

  if (fit && cfg.sweep && cfg.sweep->var == SweepVar::n_qubits) {
    for (const char* m : {"neptre", "redfield", "niba"}) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& r : rows)
        if (r.method == m && r.ok()) pts.emplace_back(r.ns, r.j[0]);
      if (pts.empty()) continue;
      try {
        const ScalingFit f = fit_scaling_exponent(pts);
        std::cerr << m << ": gamma = " << f.gamma << " +- " << f.std_error << '\n';
      } catch (const std::exception& e) {
        std::cerr << m << ": fit failed: " << e.what() << '\n';
      }
    }
  }
  return (!rows.empty() && failed == rows.size()) ? 2 : 0;
}
