#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "vixb/model.hpp"
#include "vixb/regress.hpp"

namespace vixb {

struct OracleConfig {
  std::size_t n_outer = 0;  // 0 disables the nested benchmark
  std::size_t n_inner = 1000;
};

/// A full experiment description. Omitted keys take the reference values.
struct RunConfig {
  LsvParams params;
  std::size_t n_fit = 100000;
  std::size_t n_eval = 500000;
  BasisSpec basis = lower_degree_basis();
  std::vector<double> strikes{15, 20, 25, 30, 35, 40, 45};
  std::uint64_t seed_fit = 1;
  std::uint64_t seed_eval = 2;
  OracleConfig oracle;
  bool antithetic = true;
  std::string kernel = "auto";
};

/// Flat `key = value` text, one per line, `#` starts a comment. Keys:
///   s0 alpha sigma0 v0 kappa theta eta rho vol_floor vol_cap t0 T dt
///   N N_tilde psi_degree phi_degree standardize phi_form strikes seed_fit seed_eval
///   oracle.n_outer oracle.n_inner antithetic kernel
/// Real values accept + - * / and parentheses (e.g. `T = 1 + 1/12`).
/// strikes is a comma-separated list. sigma0 sets v0 = sigma0^2 (the model
/// has sigma(S0, V0) = sqrt(V0)); giving both inconsistently is an error.
/// Errors throw ConfigError with "<source>:<line>: <message>".
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& file);

/// Checks sizes and model parameters; throws ConfigError.
void validate_config(const RunConfig& c);

/// Resolved configuration in the same key = value format, full precision.
/// parse_config(to_manifest(c)) reproduces c exactly.
std::string to_manifest(const RunConfig& c);

/// Evaluates a real-valued expression (numbers, + - * /, parentheses).
double parse_real_expression(const std::string& text);

}  // namespace vixb
