#pragma once

#include <string>

#include <json.hpp>

#include "tmlog/euler_lagrange.hpp"
#include "tmlog/extremal_solver.hpp"
#include "tmlog/fractional_calculus.hpp"
#include "tmlog/function_space.hpp"
#include "tmlog/log_functionals.hpp"
#include "tmlog/moser_sequence.hpp"
#include "tmlog/moving_plane.hpp"

namespace tmlog {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Two-column CSV with header `x,value`. Errors name the offending line.
SampledFunction load_function(const std::string& path);
void save_function(const std::string& path, const SampledFunction& u);
std::string format_function(const SampledFunction& u);
SampledFunction parse_function(const std::string& text, const std::string& origin = "<input>");

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// Adds schema_version and writes pretty-printed JSON atomically.
void save_report(const std::string& path, json report);
json load_report(const std::string& path);

/// First line the node count n, then n rows of n comma-separated entries.
void save_stiffness_csv(const std::string& path, const StiffnessForm& Q);

json to_json(const FunctionalReport& r);
json to_json(const IdentityDiscrepancy& d);
json to_json(const MoserWitness& w);
json to_json(const ELReport& r);
json to_json(const ReflectionDiagnostics& d);
json to_json(const MaximizerState& s);
MaximizerState state_from_json(const json& j);

}  // namespace tmlog
