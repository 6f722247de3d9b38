#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vixb {

/// Capped/floored CEV-Heston local-stochastic-volatility model.
///
///   dS = sigma(S, V) S dW^S
///   dV = kappa (theta - V) dt + eta sqrt(V) dW^V,   <dW^S, dW^V> = rho dt
///   sigma(S, V) = clamp(sqrt(V) (S / s0)^(alpha - 1), vol_floor, vol_cap)
///
/// Zero interest rate. The VIX window is [t0, t_end]; the simulation grid
/// starts at 0 with a single uniform step dt.
struct LsvParams {
  double s0 = 100.0;
  double v0 = 0.09;
  double alpha = 0.8;
  double kappa = 0.6;
  double theta = 0.09;
  double eta = 0.4;
  double rho = -0.5;
  double vol_floor = 0.01;
  double vol_cap = 10.0;
  double t0 = 1.0;
  double t_end = 1.0 + 1.0 / 12.0;
  double dt = 1.0 / 120.0;
};

/// Reference parameter set (S0 = 100, sigma0 = 0.3, one-month window
/// starting at t0 = 1, dt = 1/120).
LsvParams reference_params();

/// Every violated invariant, one message each. Empty means valid.
std::vector<std::string> validate(const LsvParams& p);

/// Throws InvalidInput listing all violations.
void require_valid(const LsvParams& p);

/// Effective volatility sigma(s, v). Negative v is treated as 0.
double effective_vol(const LsvParams& p, double s, double v);

struct TimeGrid {
  std::vector<double> times;  // 0 = times[0] < ... < times.back() = t_end
  std::size_t idx_t0 = 0;
  double dt = 0.0;

  std::size_t n_steps() const { return times.empty() ? 0 : times.size() - 1; }
  /// Number of steps inside [t0, t_end].
  std::size_t n_window() const { return n_steps() - idx_t0; }
};

TimeGrid make_grid(const LsvParams& p);

/// Number of steps of length dt in [0, t]; throws if t is not a grid point.
std::size_t steps_to(double t, double dt);

}  // namespace vixb
