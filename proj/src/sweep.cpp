#include "qheat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qheat/limits.hpp"

namespace qheat {

Method parse_method(const std::string& s) {
  if (s == "neptre") return Method::neptre;
  if (s == "redfield") return Method::redfield;
  if (s == "niba") return Method::niba;
  if (s == "all") return Method::all;
  throw ConfigError("unknown method '" + s + "' (expected neptre, redfield, niba or all)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::neptre: return "neptre";
    case Method::redfield: return "redfield";
    case Method::niba: return "niba";
    case Method::all: return "all";
  }
  return "?";
}

std::string to_string(SweepVar v) {
  switch (v) {
    case SweepVar::alpha: return "alpha";
    case SweepVar::delta_t: return "delta_t";
    case SweepVar::n_qubits: return "n_qubits";
    case SweepVar::eps: return "eps";
  }
  return "?";
}

namespace {

double parse_number(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + " '" + s + "' in sweep specification");
  }
}

}  // namespace

SweepRange parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("sweep must look like VAR=START:STOP:N[:log]");
  const std::string var = spec.substr(0, eq);
  SweepRange r;
  if (var == "alpha") r.var = SweepVar::alpha;
  else if (var == "delta_t") r.var = SweepVar::delta_t;
  else if (var == "n_qubits" || var == "ns") r.var = SweepVar::n_qubits;
  else if (var == "eps") r.var = SweepVar::eps;
  else throw ConfigError("unknown sweep variable '" + var + "' (expected alpha, delta_t, n_qubits or eps)");

  std::vector<std::string> parts;
  std::stringstream ss(spec.substr(eq + 1));
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4) throw ConfigError("sweep must look like VAR=START:STOP:N[:log]");
  r.start = parse_number(parts[0], "start");
  r.stop = parse_number(parts[1], "stop");
  const double n = parse_number(parts[2], "point count");
  if (n < 1 || n != std::floor(n) || n > 1e6) throw ConfigError("sweep point count must be a positive integer");
  r.count = static_cast<int>(n);
  if (parts.size() == 4) {
    if (parts[3] == "log") r.log = true;
    else if (parts[3] == "lin") r.log = false;
    else throw ConfigError("sweep scale must be 'log' or 'lin'");
  }
  if (r.log && !(r.start > 0.0 && r.stop > 0.0)) throw ConfigError("log sweep needs positive endpoints");
  return r;
}

std::vector<double> SweepRange::values() const {
  std::vector<double> v;
  if (count == 1) return {start};
  for (int i = 0; i < count; ++i) {
    const double f = double(i) / (count - 1);
    if (i == 0) v.push_back(start);
    else if (i == count - 1) v.push_back(stop);
    else if (log) v.push_back(std::exp(std::log(start) + f * (std::log(stop) - std::log(start))));
    else v.push_back(start + f * (stop - start));
  }
  return v;
}

namespace {

SweepConfig apply_point(SweepConfig c, SweepVar var, double value) {
  switch (var) {
    case SweepVar::alpha: c.alpha_l = c.alpha_r = value; break;
    case SweepVar::delta_t: c.t_left = c.t_right + value; break;
    case SweepVar::n_qubits: c.n_qubits = static_cast<int>(std::lround(value)); break;
    case SweepVar::eps: c.eps = value; break;
  }
  c.sweep.reset();
  return c;
}

void check_point(const SweepConfig& c) {
  if (c.n_qubits < 1) throw ConfigError("n_qubits must be >= 1");
  if (!(c.alpha_l > 0.0) || !(c.alpha_r > 0.0)) throw ConfigError("couplings alpha must be > 0");
  if (!(c.omega_c > 0.0)) throw ConfigError("cutoff wc must be > 0");
  if (!(c.t_left > 0.0) || !(c.t_right > 0.0)) throw ConfigError("temperatures must be > 0");
  if (!std::isfinite(c.eps) || !std::isfinite(c.delta)) throw ConfigError("eps and delta must be finite");
}

}  // namespace

void SweepConfig::validate() const {
  if (cumulant_orders < 1 || cumulant_orders > 3) throw ConfigError("cumulants must be 1, 2 or 3");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (!(rates.tol > 1e-12 && rates.tol < 1e-3)) throw ConfigError("tol-rate must lie in (1e-12, 1e-3)");
  if (!(rates.tau_tol > 1e-14 && rates.tau_tol < 1e-3)) throw ConfigError("tol-tau must lie in (1e-14, 1e-3)");
  if (!(step >= 0.0) || !std::isfinite(step)) throw ConfigError("step must be >= 0");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  check_point(*this);
  if (sweep) {
    for (double v : sweep->values()) {
      if (sweep->var == SweepVar::n_qubits && std::abs(v - std::round(v)) > 1e-9)
        throw ConfigError("n_qubits sweep produces a non-integer value");
      check_point(apply_point(*this, sweep->var, v));
    }
  }
}

SweepConfig config_from_json(const std::string& text, SweepConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a flat JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    try {
      if (k == "method") c.method = parse_method(v.get<std::string>());
      else if (k == "ns") c.n_qubits = v.get<int>();
      else if (k == "eps") c.eps = v.get<double>();
      else if (k == "delta") c.delta = v.get<double>();
      else if (k == "alpha") c.alpha_l = c.alpha_r = v.get<double>();
      else if (k == "alpha_l") c.alpha_l = v.get<double>();
      else if (k == "alpha_r") c.alpha_r = v.get<double>();
      else if (k == "wc") c.omega_c = v.get<double>();
      else if (k == "tl") c.t_left = v.get<double>();
      else if (k == "tr") c.t_right = v.get<double>();
      else if (k == "sweep") c.sweep = parse_sweep(v.get<std::string>());
      else if (k == "cumulants") c.cumulant_orders = v.get<int>();
      else if (k == "out") c.out_path = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else if (k == "tol_rate") c.rates.tol = v.get<double>();
      else if (k == "tol_tau") c.rates.tau_tol = v.get<double>();
      else if (k == "step") c.step = v.get<double>();
      else if (k == "drop_lamb_shift") c.rates.drop_lamb_shift = v.get<bool>();
      else if (k == "threads") c.threads = v.get<int>();
      else throw ConfigError("unknown config key '" + k + "'");
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config key '" + k + "' has the wrong type");
    }
  }
  return c;
}

ResultRow evaluate_point(const SweepConfig& c, Method method) {
  const auto t0 = std::chrono::steady_clock::now();
  ResultRow row;
  row.method = to_string(method);
  row.ns = c.n_qubits;
  row.eps = c.eps;
  row.delta = c.delta;
  row.alpha_l = c.alpha_l;
  row.alpha_r = c.alpha_r;
  row.wc = c.omega_c;
  row.tl = c.t_left;
  row.tr = c.t_right;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.eta = row.xi = nan;
  row.j.fill(nan);
  row.j_err.fill(nan);
  const BathParams left{Side::L, c.alpha_l, c.omega_c, c.t_left};
  const BathParams right{Side::R, c.alpha_r, c.omega_c, c.t_right};
  const CumulantOptions copt{c.cumulant_orders, c.step};
  try {
    const PolaronConstants pc = polaron_constants(left, right);
    row.eta = pc.eta;
    row.xi = pc.xi;
    CumulantResult res;
    switch (method) {
      case Method::neptre: {
        NeptreParams p;
        p.n_qubits = c.n_qubits;
        p.eps = c.eps;
        p.delta = c.delta;
        p.left = left;
        p.right = right;
        p.rates = c.rates;
        res = cumulants(NeptreModel(p), copt);
        break;
      }
      case Method::redfield: {
        RedfieldParams p;
        p.n_qubits = c.n_qubits;
        p.eps = c.eps;
        p.delta = c.delta;
        p.left = left;
        p.right = right;
        res = cumulants(RedfieldModel(p), copt);
        break;
      }
      case Method::niba: {
        NibaParams p;
        p.n_qubits = c.n_qubits;
        p.eps = c.eps;
        p.delta = c.delta;
        p.left = left;
        p.right = right;
        p.rates = c.rates;
        res = cumulants(NibaModel(p), copt);
        break;
      }
      case Method::all: throw std::logic_error("evaluate_point needs a concrete method");
    }
    for (int n = 0; n < c.cumulant_orders; ++n) {
      row.j[n] = res.j[n];
      row.j_err[n] = res.error[n];
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    row.status = "error: " + msg;
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::vector<ResultRow> run_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<SweepConfig> points;
  if (config.sweep) {
    for (double v : config.sweep->values()) points.push_back(apply_point(config, config.sweep->var, v));
  } else {
    points.push_back(config);
  }
  std::vector<Method> methods;
  if (config.method == Method::all) methods = {Method::neptre, Method::redfield, Method::niba};
  else methods = {config.method};

  const size_t jobs = points.size() * methods.size();
  std::vector<ResultRow> rows(jobs);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < jobs; k = next++)
      rows[k] = evaluate_point(points[k / methods.size()], methods[k % methods.size()]);
  };
  size_t nthreads = config.threads > 0 ? size_t(config.threads) : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, jobs);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& ns_j) {
  const size_t n = ns_j.size();
  if (n < 3) throw std::invalid_argument("scaling fit needs at least 3 points");
  std::vector<double> x, y;
  for (const auto& [ns, j] : ns_j) {
    if (!(ns > 0.0) || !(j > 0.0) || !std::isfinite(j))
      throw std::domain_error("scaling fit needs positive N_s and positive finite currents");
    x.push_back(std::log(ns));
    y.push_back(std::log(j));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("scaling fit needs at least two distinct N_s");
  ScalingFit f;
  f.gamma = sxy / sxx;
  f.log_prefactor = my - f.gamma * mx;
  double ssr = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.log_prefactor - f.gamma * x[i];
    ssr += r * r;
  }
  f.std_error = std::sqrt(ssr / double(n - 2) / sxx);
  return f;
}

const char* const kCsvColumns =
    "method,ns,eps,delta,alpha_l,alpha_r,wc,tl,tr,eta,xi,j1,j1_err,j2,j2_err,j3,j3_err,status";

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvColumns << '\n';
  for (const auto& r : rows) {
    os << r.method << ',' << r.ns << ',' << num(r.eps) << ',' << num(r.delta) << ',' << num(r.alpha_l) << ','
       << num(r.alpha_r) << ',' << num(r.wc) << ',' << num(r.tl) << ',' << num(r.tr) << ',' << num(r.eta) << ','
       << num(r.xi);
    for (int n = 0; n < 3; ++n) os << ',' << num(r.j[n]) << ',' << num(r.j_err[n]);
    os << ',' << csv_field(r.status) << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto val = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["method"] = r.method;
    o["ns"] = r.ns;
    o["eps"] = val(r.eps);
    o["delta"] = val(r.delta);
    o["alpha_l"] = val(r.alpha_l);
    o["alpha_r"] = val(r.alpha_r);
    o["wc"] = val(r.wc);
    o["tl"] = val(r.tl);
    o["tr"] = val(r.tr);
    o["eta"] = val(r.eta);
    o["xi"] = val(r.xi);
    const char* jn[3] = {"j1", "j2", "j3"};
    const char* en[3] = {"j1_err", "j2_err", "j3_err"};
    for (int n = 0; n < 3; ++n) {
      o[jn[n]] = val(r.j[n]);
      o[en[n]] = val(r.j_err[n]);
    }
    o["status"] = r.status;
    arr.push_back(std::move(o));
  }
  os << arr.dump(2) << '\n';
}

}  // namespace qheat
