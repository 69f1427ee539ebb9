#include "tmlog/growth_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "tmlog/error.hpp"

namespace tmlog {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogMax = 709.0;

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

[[noreturn]] void overflow_at(double s) {
  fail(ErrorKind::overflow, "growth model overflows at s = " + fmt_double(s));
}

// Fritsch-Carlson slopes for monotone cubic Hermite interpolation.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      d[k] = 0.0;
    } else {
      const double h0 = x[k] - x[k - 1], h1 = x[k + 1] - x[k];
      const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) s = 0.0;
    else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) s = 3.0 * d0;
    return s;
  };
  d[0] = end_slope(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
  d[n - 1] = end_slope(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

std::map<std::string, double> parse_params(const std::string& body, const std::string& spec);

}  // namespace

GrowthModel GrowthModel::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) fail(ErrorKind::invalid_argument, "power exponent must be positive");
  GrowthModel g;
  g.kind_ = Kind::power;
  g.p_ = p;
  return g;
}

GrowthModel GrowthModel::critical_family(double gamma, double c) {
  if (!std::isfinite(gamma) || !(c > 0.0))
    fail(ErrorKind::invalid_argument, "critical family needs finite gamma and c > 0");
  GrowthModel g;
  g.kind_ = Kind::critical_family;
  g.gamma_ = gamma;
  g.c_ = c;
  return g;
}

GrowthModel GrowthModel::paper_piecewise(double gamma) {
  GrowthModel g;
  g.kind_ = Kind::paper_piecewise;
  g.gamma_ = gamma;
  g.cut_ = c_gamma(gamma);
  const double c = g.cut_;
  g.shift_ = std::exp(kPi * c * c - gamma * std::log1p(c)) - std::expm1(kPi * c * c);
  return g;
}

GrowthModel GrowthModel::table(std::vector<double> s, std::vector<double> values) {
  if (s.size() < 2 || s.size() != values.size())
    fail(ErrorKind::invalid_argument, "growth table needs >= 2 matching (s, G) pairs");
  if (s.front() != 0.0) fail(ErrorKind::invalid_argument, "growth table must start at s = 0");
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!std::isfinite(s[k]) || !std::isfinite(values[k]) || values[k] < 0.0)
      fail(ErrorKind::invalid_argument, "growth table entries must be finite with G >= 0");
    if (k > 0 && !(s[k] > s[k - 1]))
      fail(ErrorKind::invalid_argument, "growth table abscissae must increase");
    if (k > 0 && values[k] < values[k - 1])
      fail(ErrorKind::invalid_argument, "growth table values must be nondecreasing");
  }
  GrowthModel g;
  g.kind_ = Kind::custom_table;
  g.td_ = pchip_slopes(s, values);
  g.ts_ = std::move(s);
  g.tv_ = std::move(values);
  return g;
}

GrowthModel GrowthModel::scaled(double alpha) const {
  if (!(alpha > 0.0)) fail(ErrorKind::invalid_argument, "scale factor must be positive");
  GrowthModel g = *this;
  g.scale_ *= alpha;
  return g;
}

GrowthModel GrowthModel::with_s_max(double s_max) const {
  if (!(s_max > 0.0)) fail(ErrorKind::invalid_argument, "s_max must be positive");
  GrowthModel g = *this;
  g.s_max_ = s_max;
  return g;
}

bool GrowthModel::differentiable() const {
  switch (kind_) {
    case Kind::power: return p_ >= 1.0;
    case Kind::critical_family:
    case Kind::paper_piecewise: return true;
    case Kind::custom_table: return false;
  }
  return false;
}

bool GrowthModel::claims_assumption_a() const {
  switch (kind_) {
    case Kind::power:
    case Kind::paper_piecewise:
    case Kind::custom_table: return true;
    // e^{πs²}(1+s)^{-γ} dips below its value at 0 for γ > 0.
    case Kind::critical_family: return gamma_ <= 0.0;
  }
  return false;
}

std::string GrowthModel::spec() const {
  std::string s;
  switch (kind_) {
    case Kind::power: s = "power:" + fmt_double(p_); break;
    case Kind::critical_family:
      s = "critical:gamma=" + fmt_double(gamma_) + ",c=" + fmt_double(c_);
      break;
    case Kind::paper_piecewise: s = "paper:gamma=" + fmt_double(gamma_); break;
    case Kind::custom_table: s = "table:" + table_path_; break;
  }
  if (scale_ != 1.0) s += ",scale=" + fmt_double(scale_);
  return s;
}

void GrowthModel::check_range(double s) const {
  if (!std::isfinite(s)) fail(ErrorKind::invalid_argument, "growth model argument is not finite");
  if (std::abs(s) > s_max_) overflow_at(s);
}

std::pair<double, double> GrowthModel::piecewise_branches(double s) const {
  const double a = std::abs(s);
  return {std::expm1(kPi * a * a), std::exp(kPi * a * a - gamma_ * std::log1p(a)) - shift_};
}

double GrowthModel::log_value(double s) const {
  const double a = std::abs(s);
  const double ls = std::log(scale_);
  switch (kind_) {
    case Kind::power:
      return a == 0.0 ? -std::numeric_limits<double>::infinity() : ls + p_ * std::log(a);
    case Kind::critical_family:
      return ls + std::log(c_) + kPi * a * a - gamma_ * std::log1p(a);
    case Kind::paper_piecewise: {
      if (a == 0.0) return -std::numeric_limits<double>::infinity();
      if (a <= cut_) return ls + std::log(std::expm1(kPi * a * a));
      const double e = kPi * a * a - gamma_ * std::log1p(a);
      return ls + e + std::log1p(-shift_ * std::exp(-e));
    }
    case Kind::custom_table: {
      const double v = value(s) / scale_;
      return v > 0.0 ? ls + std::log(v) : -std::numeric_limits<double>::infinity();
    }
  }
  return 0.0;
}

double GrowthModel::value(double s) const {
  check_range(s);
  const double a = std::abs(s);
  switch (kind_) {
    case Kind::power: {
      const double v = scale_ * std::pow(a, p_);
      if (!std::isfinite(v)) overflow_at(s);
      return v;
    }
    case Kind::critical_family: {
      const double l = log_value(a);
      if (l > kLogMax) overflow_at(s);
      return std::exp(l);
    }
    case Kind::paper_piecewise: {
      if (a <= cut_) return scale_ * std::expm1(kPi * a * a);
      const double e = kPi * a * a - gamma_ * std::log1p(a);
      if (e + std::log(scale_) > kLogMax) overflow_at(s);
      return scale_ * (std::exp(e) - shift_);
    }
    case Kind::custom_table: {
      if (a > ts_.back()) overflow_at(s);
      std::size_t k = static_cast<std::size_t>(std::upper_bound(ts_.begin(), ts_.end(), a) - ts_.begin());
      k = std::min(std::max<std::size_t>(k, 1), ts_.size() - 1) - 1;
      const double h = ts_[k + 1] - ts_[k], t = (a - ts_[k]) / h;
      const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
      const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
      return scale_ * (h00 * tv_[k] + h10 * h * td_[k] + h01 * tv_[k + 1] + h11 * h * td_[k + 1]);
    }
  }
  return 0.0;
}

double GrowthModel::derivative(double s) const {
  check_range(s);
  if (!differentiable())
    fail(ErrorKind::unsupported_input, "growth model " + spec() + " has no derivative");
  const double a = std::abs(s), sign = s < 0.0 ? -1.0 : 1.0;
  switch (kind_) {
    case Kind::power:
      if (a == 0.0) return 0.0;
      return sign * scale_ * p_ * std::pow(a, p_ - 1.0);
    case Kind::critical_family:
      return sign * value(a) * (2.0 * kPi * a - gamma_ / (1.0 + a));
    case Kind::paper_piecewise: {
      if (a <= cut_) return sign * scale_ * 2.0 * kPi * a * std::exp(kPi * a * a);
      const double e = kPi * a * a - gamma_ * std::log1p(a);
      if (e + std::log(scale_) > kLogMax) overflow_at(s);
      return sign * scale_ * std::exp(e) * (2.0 * kPi * a - gamma_ / (1.0 + a));
    }
    case Kind::custom_table: break;
  }
  return 0.0;
}

std::pair<double, std::optional<double>> GrowthModel::eval(double s, bool want_derivative) const {
  const double v = value(s);
  if (!want_derivative) return {v, std::nullopt};
  return {v, derivative(s)};
}

double c_gamma(double gamma) {
  if (!(gamma > 0.0)) fail(ErrorKind::invalid_argument, "c_gamma needs gamma > 0");
  // (sqrt(1 + 2γ/π) - 1)/2 written without cancellation for small γ.
  const double z = 2.0 * gamma / kPi;
  return 0.5 * z / (std::sqrt(1.0 + z) + 1.0);
}

namespace {

std::map<std::string, double> parse_params(const std::string& body, const std::string& spec) {
  std::map<std::string, double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::invalid_argument, "malformed growth parameter '" + item + "' in " + spec);
    const std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      out[key] = v;
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "malformed growth parameter '" + item + "' in " + spec);
    }
  }
  return out;
}

}  // namespace

GrowthModel GrowthModel::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) fail(ErrorKind::invalid_argument, "growth spec needs 'kind:params': " + spec);
  const std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);
  auto take_scale = [&](GrowthModel g, std::map<std::string, double>& p) {
    if (auto it = p.find("scale"); it != p.end()) {
      g = g.scaled(it->second);
      p.erase(it);
    }
    if (auto it = p.find("s_max"); it != p.end()) {
      g = g.with_s_max(it->second);
      p.erase(it);
    }
    if (!p.empty()) fail(ErrorKind::invalid_argument, "unknown growth parameter '" + p.begin()->first + "' in " + spec);
    return g;
  };
  if (kind == "power") {
    const auto comma = body.find(',');
    double p = 0.0;
    try {
      std::size_t used = 0;
      const std::string head = body.substr(0, comma);
      p = std::stod(head, &used);
      if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "malformed power exponent in " + spec);
    }
    auto params = comma == std::string::npos ? std::map<std::string, double>{}
                                             : parse_params(body.substr(comma + 1), spec);
    return take_scale(GrowthModel::power(p), params);
  }
  if (kind == "critical" || kind == "paper") {
    auto params = parse_params(body, spec);
    auto it = params.find("gamma");
    if (it == params.end()) fail(ErrorKind::invalid_argument, "growth spec needs gamma=: " + spec);
    const double gamma = it->second;
    params.erase(it);
    if (kind == "paper") return take_scale(GrowthModel::paper_piecewise(gamma), params);
    double c = 1.0;
    if (auto ic = params.find("c"); ic != params.end()) {
      c = ic->second;
      params.erase(ic);
    }
    return take_scale(GrowthModel::critical_family(gamma, c), params);
  }
  if (kind == "table") {
    std::ifstream in(body);
    if (!in) fail(ErrorKind::io, "cannot open growth table " + body);
    std::vector<double> s, v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (lineno == 1 || line.empty()) continue;
      const auto comma = line.find(',');
      try {
        if (comma == std::string::npos) throw std::invalid_argument(line);
        s.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
      } catch (const std::exception&) {
        fail(ErrorKind::io, "malformed growth table row at line " + std::to_string(lineno));
      }
    }
    GrowthModel g = GrowthModel::table(std::move(s), std::move(v));
    g.table_path_ = body;
    return g;
  }
  fail(ErrorKind::invalid_argument, "unknown growth kind '" + kind + "'");
}

GrowthClassification gamma_critical_classify(const GrowthModel& G, double gamma, double s_grid_max,
                                             double s0) {
  if (!(s_grid_max >= 10.0)) fail(ErrorKind::invalid_argument, "s_grid_max must be >= 10");
  if (!(s0 > 0.0) || s0 >= s_grid_max) fail(ErrorKind::invalid_argument, "s0 must lie in (0, s_grid_max)");
  constexpr int kSteps = 20000;
  auto sup_ratio = [&](double smax, double& arg) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kSteps; ++i) {
      const double s = smax * i / kSteps;
      const double r = G.log_value(s) + gamma * std::log1p(s) - kPi * s * s;
      if (r > best) {
        best = r;
        arg = s;
      }
    }
    return best;
  };
  auto inf_ratio = [&](double smax) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kSteps; ++i) {
      const double s = s0 + (smax - s0) * i / kSteps;
      worst = std::min(worst, G.log_value(s) + gamma * std::log(s) - kPi * s * s);
    }
    return worst;
  };
  GrowthClassification out;
  out.s0 = s0;
  const double band = std::log(1.01);
  double arg1 = 0.0, arg2 = 0.0;
  const double sup1 = sup_ratio(s_grid_max, arg1), sup2 = sup_ratio(2.0 * s_grid_max, arg2);
  out.sup_log_ratio = sup2;
  out.sup_arg = arg2;
  out.at_most = std::isfinite(sup1) && std::isfinite(sup2) && std::abs(sup2 - sup1) < band;
  const double inf1 = inf_ratio(s_grid_max), inf2 = inf_ratio(2.0 * s_grid_max);
  out.inf_log_ratio = inf2;
  out.at_least = std::isfinite(inf1) && std::isfinite(inf2) && std::abs(inf2 - inf1) < band;
  return out;
}

}  // namespace tmlog
