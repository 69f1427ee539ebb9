#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tmlog/fractional_calculus.hpp"

namespace tmlog {

struct RunConfig {
  std::string subcommand;
  std::size_t grid = 257;
  double half_width = 1.0;
  bool refine = false;
  std::optional<std::string> growth;
  double gamma = 0.5;
  std::vector<double> n_list{10.0, 100.0, 1000.0, 10000.0};
  double tol = 1e-3;
  int max_iter = 2000;
  std::uint64_t seed = 7;
  bool entire = false;
  std::optional<std::string> input;
  std::optional<std::string> state;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  bool plateau = false;
  std::vector<double> probes{0.5, 1e-9, 2.0};
  double lambda_min = -8.0;
  double lambda_max = 2.0;
  int lambda_steps = 41;
  QuadratureSpec quadrature;
};

/// Exit codes: 0 all checks passed, 1 check failures, 2 usage or I/O error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tmlog
