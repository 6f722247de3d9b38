#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vixb/bounds.hpp"
#include "vixb/config.hpp"
#include "vixb/parallel.hpp"
#include "vixb/regress.hpp"

namespace vixb {

struct PriceRun {
  RunConfig config;     // as run, kernel resolved to a concrete name
  RegressionFit fit;
  DerivativeTable table;
};

/// Fit batch (N paths, seed_fit), evaluation batch (N_tilde paths, seed_eval),
/// then the nested oracle on the first oracle.n_outer evaluation paths when
/// enabled. exec.kernel is ignored in favour of config.kernel.
PriceRun run_price(const RunConfig& config, const Exec& exec = {});

/// Nested oracle only; n_outer = 0 in the config falls back to 50000.
TableColumn run_oracle(const RunConfig& config, const Exec& exec = {});

/// Parameters accepted by run_sweep.
std::vector<std::string> sweep_parameters();
void set_parameter(RunConfig& config, const std::string& name, double value);

struct SweepRow {
  double value = 0.0;
  BoundEstimate plain, lower, upper;  // futures
};

/// One run_price per value (oracle and strikes dropped), same seeds for all.
std::vector<SweepRow> run_sweep(const RunConfig& config, const std::string& name,
                                std::span<const double> values, const Exec& exec = {});

struct FutureBounds {
  BoundEstimate lower, upper, plain;
};

struct ConvergenceRow {
  std::size_t n_paths = 0;
  FutureBounds low;   // degrees (3, 2)
  FutureBounds high;  // degrees (4, 3)
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::optional<BoundEstimate> oracle;  // reference line when the oracle is enabled
};

/// For each path count n, both degree pairs with N = N_tilde = n.
ConvergenceResult run_convergence(const RunConfig& config, std::span<const std::size_t> counts,
                                  const Exec& exec = {});

}  // namespace vixb
