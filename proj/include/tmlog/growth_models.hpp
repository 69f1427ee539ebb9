#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tmlog {

/// Even nonlinearity G with optional derivative g = G'.
///
/// Kinds:
///   power(p)               G = |s|^p
///   critical_family(γ, c)  G = c e^{πs²} / (1+|s|)^γ
///   paper_piecewise(γ)     e^{πs²} - 1 below c_γ, shifted critical profile above
///   custom_table           monotone cubic (PCHIP) interpolation of (s, G) pairs
class GrowthModel {
 public:
  enum class Kind { power, critical_family, paper_piecewise, custom_table };

  static GrowthModel power(double p);
  static GrowthModel critical_family(double gamma, double c = 1.0);
  static GrowthModel paper_piecewise(double gamma);
  static GrowthModel table(std::vector<double> s, std::vector<double> values);
  /// Parses `power:2`, `critical:gamma=2[,c=1]`, `paper:gamma=2`, `table:path.csv`.
  static GrowthModel parse(const std::string& spec);

  /// Same model multiplied by alpha > 0.
  GrowthModel scaled(double alpha) const;
  GrowthModel with_s_max(double s_max) const;

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double exponent() const { return p_; }
  double coefficient() const { return c_; }
  double scale() const { return scale_; }
  double s_max() const { return s_max_; }
  bool differentiable() const;
  /// True for kinds that are strictly increasing on [0, inf) (assumption (A)).
  bool claims_assumption_a() const;
  std::string spec() const;

  double operator()(double s) const { return value(s); }
  double value(double s) const;
  double derivative(double s) const;
  /// log G(|s|) without overflow; -inf where G vanishes.
  double log_value(double s) const;
  std::pair<double, std::optional<double>> eval(double s, bool want_derivative) const;

  /// Branch values of paper_piecewise at s (first = inner formula, second = outer).
  std::pair<double, double> piecewise_branches(double s) const;

 private:
  GrowthModel() = default;
  void check_range(double s) const;

  Kind kind_ = Kind::power;
  double p_ = 2.0;
  double gamma_ = 0.0;
  double c_ = 1.0;
  double scale_ = 1.0;
  double cut_ = 0.0;     // c_γ for paper_piecewise
  double shift_ = 0.0;   // constant subtracted on the outer branch
  double s_max_ = std::numeric_limits<double>::infinity();
  std::vector<double> ts_, tv_, td_;  // table abscissae, values, PCHIP slopes
  std::string table_path_;
};

/// Minimum point of s -> e^{πs²}(1+s)^{-γ} on [0, inf).
double c_gamma(double gamma);

struct GrowthClassification {
  bool at_most = false;
  double sup_log_ratio = 0.0;  // sup of log(G (1+s)^γ e^{-πs²})
  double sup_arg = 0.0;
  bool at_least = false;
  double inf_log_ratio = 0.0;  // inf over s >= s0 of log(G s^γ e^{-πs²})
  double s0 = 1.0;
};

/// Log-space probe of the two growth conditions; "finite" means the extremum
/// moves by less than 1% when the probed range doubles.
GrowthClassification gamma_critical_classify(const GrowthModel& G, double gamma,
                                             double s_grid_max, double s0 = 1.0);

}  // namespace tmlog
