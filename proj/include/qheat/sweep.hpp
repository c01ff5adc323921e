#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qheat/rates.hpp"

namespace qheat {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { neptre, redfield, niba, all };
enum class SweepVar { alpha, delta_t, n_qubits, eps };

Method parse_method(const std::string& s);
std::string to_string(Method m);
std::string to_string(SweepVar v);

// VAR=START:STOP:N[:log|:lin]
struct SweepRange {
  SweepVar var = SweepVar::alpha;
  double start = 0.0, stop = 0.0;
  int count = 1;
  bool log = false;
  std::vector<double> values() const;
};
SweepRange parse_sweep(const std::string& spec);

struct SweepConfig {
  Method method = Method::neptre;
  int n_qubits = 2;
  double eps = 0.0;
  double delta = 1.0;
  double alpha_l = 0.001, alpha_r = 0.001;
  double omega_c = 6.0;
  double t_left = 1.5, t_right = 0.5;
  std::optional<SweepRange> sweep;
  int cumulant_orders = 3;
  RateOptions rates{};
  double step = 0.0;  // cumulant finite-difference step, 0 = automatic
  std::string out_path;  // empty = stdout
  std::string format = "csv";
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws ConfigError
};

// Flat JSON object; keys mirror the long command-line flags with '-' -> '_'.
// Values present in the object override those in `base`.
SweepConfig config_from_json(const std::string& text, SweepConfig base = {});

struct ResultRow {
  std::string method;
  int ns = 0;
  double eps = 0, delta = 0, alpha_l = 0, alpha_r = 0, wc = 0, tl = 0, tr = 0;
  double eta = 0, xi = 0;
  std::array<double, 3> j{}, j_err{};
  std::string status = "ok";
  double wall_time = 0.0;  // seconds; not written to output files

  bool ok() const { return status == "ok"; }
};

// One row per sweep point per method, in sweep order (methods in the order
// neptre, redfield, niba within a point).  Failures are recorded in-row.
std::vector<ResultRow> run_sweep(const SweepConfig& config);

// Single parameter point with one concrete method.
ResultRow evaluate_point(const SweepConfig& point, Method method);

struct ScalingFit {
  double gamma = 0.0;
  double std_error = 0.0;
  double log_prefactor = 0.0;
};

// Ordinary least squares slope of ln J against ln N_s.
ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& ns_j);

extern const char* const kCsvColumns;
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_json(std::ostream& os, const std::vector<ResultRow>& rows);

}  // namespace qheat
