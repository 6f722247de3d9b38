#include "vixb/experiment.hpp"

#include <algorithm>

#include "vixb/error.hpp"
#include "vixb/kernels.hpp"
#include "vixb/oracle.hpp"
#include "vixb/simulate.hpp"

namespace vixb {
namespace {

Exec exec_for(const RunConfig& c, const Exec& exec) {
  Exec e = exec;
  e.kernel = kernels::select(c.kernel).name;
  return e;
}

}  // namespace

PriceRun run_price(const RunConfig& config, const Exec& exec) {
  validate_config(config);
  const Exec e = exec_for(config, exec);
  PriceRun run;
  run.config = config;
  run.config.kernel = e.kernel;
  const LsvParams& p = config.params;

  {
    const PathBatch fit_batch = simulate_paths(p, config.n_fit, config.seed_fit, config.antithetic, e);
    run.fit = fit_lsmc(fit_batch, config.basis, e);
  }

  const PathBatch eval = simulate_paths(p, config.n_eval, config.seed_eval, config.antithetic, e);
  const auto x_hat = predict_x_batch(run.fit, eval, e);
  const auto m_hat = predict_mart_batch(run.fit, eval, e);

  std::optional<TableColumn> oracle;
  if (config.oracle.n_outer > 0) {
    const OuterStates outer =
        config.oracle.n_outer <= eval.n_paths
            ? reuse_outer_paths(eval, config.oracle.n_outer)
            : simulate_t0_states(p, config.oracle.n_outer, config.seed_eval, config.antithetic, e);
    oracle = nested_price(p, outer, config.oracle.n_inner, config.seed_eval, config.strikes, e);
  }

  run.table = assemble({eval.realised_var, x_hat, m_hat}, config.strikes, std::move(oracle));
  return run;
}

TableColumn run_oracle(const RunConfig& config, const Exec& exec) {
  RunConfig c = config;
  if (c.oracle.n_outer == 0) c.oracle.n_outer = 50000;
  validate_config(c);
  const Exec e = exec_for(c, exec);
  const OuterStates outer =
      simulate_t0_states(c.params, c.oracle.n_outer, c.seed_eval, c.antithetic, e);
  return nested_price(c.params, outer, c.oracle.n_inner, c.seed_eval, c.strikes, e);
}

std::vector<std::string> sweep_parameters() {
  return {"rho", "eta", "alpha", "kappa", "theta", "v0", "s0"};
}

void set_parameter(RunConfig& config, const std::string& name, double value) {
  auto& p = config.params;
  if (name == "rho") p.rho = value;
  else if (name == "eta") p.eta = value;
  else if (name == "alpha") p.alpha = value;
  else if (name == "kappa") p.kappa = value;
  else if (name == "theta") p.theta = value;
  else if (name == "v0") p.v0 = value;
  else if (name == "s0") p.s0 = value;
  else throw ConfigError("cannot sweep parameter '" + name + "'");
}

std::vector<SweepRow> run_sweep(const RunConfig& config, const std::string& name,
                                std::span<const double> values, const Exec& exec) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (double value : values) {
    RunConfig c = config;
    c.strikes.clear();
    c.oracle.n_outer = 0;
    set_parameter(c, name, value);
    const PriceRun run = run_price(c, exec);
    rows.push_back({value, run.table.plain.future, run.table.lower.future,
                    run.table.upper.future});
  }
  return rows;
}

ConvergenceResult run_convergence(const RunConfig& config, std::span<const std::size_t> counts,
                                  const Exec& exec) {
  if (counts.empty()) throw ConfigError("convergence needs at least one path count");
  if (!std::is_sorted(counts.begin(), counts.end()) ||
      std::adjacent_find(counts.begin(), counts.end()) != counts.end())
    throw ConfigError("path counts must be strictly increasing");
  ConvergenceResult out;
  auto future_bounds = [&](std::size_t n, const BasisSpec& degrees) {
    RunConfig c = config;
    c.n_fit = c.n_eval = n;
    c.basis = degrees;
    c.basis.standardize = config.basis.standardize;
    c.basis.phi_form = config.basis.phi_form;
    c.strikes.clear();
    c.oracle.n_outer = 0;
    const DerivativeTable t = run_price(c, exec).table;
    return FutureBounds{t.lower.future, t.upper.future, t.plain.future};
  };
  for (std::size_t n : counts)
    out.rows.push_back({n, future_bounds(n, lower_degree_basis()),
                        future_bounds(n, higher_degree_basis())});
  if (config.oracle.n_outer > 0) {
    RunConfig c = config;
    c.strikes.clear();
    out.oracle = run_oracle(c, exec).future;
  }
  return out;
}

}  // namespace vixb
