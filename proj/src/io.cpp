#include "tmlog/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tmlog/error.hpp"

namespace tmlog {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void csv_error(const std::string& origin, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << origin << ": line " << line << ": " << what;
  fail(ErrorKind::io, os.str());
}

double parse_number(const std::string& field, const std::string& origin, std::size_t line) {
  double v = 0.0;
  const char* b = field.data();
  const char* e = b + field.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (field.empty() || ec != std::errc() || p != e) csv_error(origin, line, "not a number: '" + field + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string format_function(const SampledFunction& u) {
  std::string out = "x,value\n";
  char buf[64];
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.grid()[i], u[i]);
    out += buf;
  }
  return out;
}

SampledFunction parse_function(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::vector<double> x, v;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (!header) {
      if (s != "x,value") csv_error(origin, line, "expected header 'x,value'");
      header = true;
      continue;
    }
    if (s.empty()) continue;
    const auto comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
      csv_error(origin, line, "expected two comma-separated fields");
    x.push_back(parse_number(trim(s.substr(0, comma)), origin, line));
    v.push_back(parse_number(trim(s.substr(comma + 1)), origin, line));
    if (x.size() > 1 && !(x.back() > x[x.size() - 2])) csv_error(origin, line, "abscissae must increase strictly");
  }
  if (!header) csv_error(origin, 1, "expected header 'x,value'");
  if (x.size() < 3) csv_error(origin, line, "need at least 3 rows");
  return SampledFunction(Grid1D(std::move(x)), std::move(v));
}

SampledFunction load_function(const std::string& path) { return parse_function(read_file(path), path); }

void save_function(const std::string& path, const SampledFunction& u) { write_atomic(path, format_function(u)); }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::io, "cannot rename onto " + path);
  }
}

void save_report(const std::string& path, json report) {
  report["schema_version"] = kSchemaVersion;
  write_atomic(path, report.dump(2) + "\n");
}

json load_report(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::io, path + ": " + e.what());
  }
}

void save_stiffness_csv(const std::string& path, const StiffnessForm& Q) {
  std::string out = std::to_string(Q.entries.rows()) + "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < Q.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < Q.entries.cols(); ++j) {
      std::snprintf(buf, sizeof buf, j ? ",%.17g" : "%.17g", Q.entries(i, j));
      out += buf;
    }
    out += '\n';
  }
  write_atomic(path, out);
}

json to_json(const FunctionalReport& r) {
  return {{"phi_plus", r.phi_plus},
          {"phi_minus", r.phi_minus},
          {"phi", r.phi},
          {"method", to_string(r.method)},
          {"est_error", r.est_error}};
}

json to_json(const IdentityDiscrepancy& d) {
  return {{"probe", d.probe},
          {"x", optional_json(d.x)},
          {"direct_value", d.direct_value},
          {"formula_value", d.formula_value},
          {"abs_gap", d.abs_gap}};
}

json to_json(const MoserWitness& w) {
  return {{"n", w.n},
          {"A_n", w.A_n},
          {"components", {{"I12", w.components.I12}, {"I13", w.components.I13},
                          {"I22", w.components.I22}, {"I23", w.components.I23}}},
          {"seminorm_sq_closed", w.seminorm_sq_closed},
          {"seminorm_sq_numeric", w.seminorm_sq_numeric},
          {"quarter_norm_sq", w.quarter_norm_sq},
          {"member", w.member},
          {"bracket", w.bracket},
          {"phi_lower_bound", optional_json(w.phi_lower_bound)},
          {"phi_direct", optional_json(w.phi_direct)}};
}

json to_json(const ELReport& r) {
  return {{"residual_u", r.residual_u},
          {"residual_w", r.residual_w},
          {"u_decay_exponent", optional_json(r.u_decay_exponent)},
          {"w_log_slope", r.w_log_slope},
          {"theta_used", r.theta_used},
          {"mode", to_string(r.mode)},
          {"nodes_u", r.nodes_u},
          {"nodes_w", r.nodes_w},
          {"failed_nodes", r.failed_nodes},
          {"failure_ratio", r.failure_ratio}};
}

json to_json(const ReflectionDiagnostics& d) {
  return {{"lambda_grid", d.lambda_grid},
          {"min_u_lambda", d.min_u_lambda},
          {"sigma_minus_measure", d.sigma_minus_measure},
          {"c_lambda", d.c_lambda},
          {"c_lambda_worst", d.c_lambda_worst},
          {"envelope", d.envelope},
          {"lambda1_estimate", d.lambda1_estimate},
          {"symmetry_score", d.symmetry_score},
          {"mu_fit", optional_json(d.mu_fit)}};
}

json to_json(const MaximizerState& s) {
  json history = json::array();
  for (const HistoryEntry& h : s.history)
    history.push_back({{"iteration", h.iteration}, {"phi", h.phi}, {"constraint", h.constraint_value}});
  json sym = json::array();
  for (const SymmetrizationRecord& r : s.symmetrizations)
    sym.push_back({{"iteration", r.iteration},
                   {"phi_plus_before", r.phi_plus_before},
                   {"phi_plus_after", r.phi_plus_after},
                   {"constraint_before", r.constraint_before},
                   {"constraint_after", r.constraint_after},
                   {"accepted", r.accepted}});
  return {{"grid", s.grid.nodes()},
          {"growth", s.growth},
          {"entire_space", s.entire_space},
          {"coefficients", s.coefficients},
          {"phi", s.phi},
          {"constraint_value", s.constraint_value},
          {"kkt_residual", s.kkt_residual},
          {"theta", s.theta},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"history", history},
          {"symmetrizations", sym}};
}

MaximizerState state_from_json(const json& j) {
  try {
    MaximizerState s;
    s.grid = Grid1D(j.at("grid").get<std::vector<double>>());
    s.growth = j.at("growth").get<std::string>();
    s.entire_space = j.value("entire_space", false);
    s.coefficients = j.at("coefficients").get<std::vector<double>>();
    if (s.coefficients.size() != s.grid.size()) fail(ErrorKind::io, "state: coefficient count differs from grid size");
    s.phi = j.value("phi", 0.0);
    s.constraint_value = j.value("constraint_value", 0.0);
    s.kkt_residual = j.value("kkt_residual", 0.0);
    s.theta = j.value("theta", 0.0);
    s.iterations = j.value("iterations", 0);
    s.converged = j.value("converged", false);
    for (const json& h : j.value("history", json::array()))
      s.history.push_back({h.at("iteration").get<int>(), h.at("phi").get<double>(), h.at("constraint").get<double>()});
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::io, std::string("malformed state: ") + e.what());
  }
}

}  // namespace tmlog
