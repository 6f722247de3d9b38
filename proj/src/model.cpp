#include "vixb/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vixb/error.hpp"

namespace vixb {
namespace {

constexpr double kGridTol = 1e-9;

bool on_grid(double t, double dt) {
  const double k = t / dt;
  return std::abs(k - std::round(k)) <= kGridTol * std::max(1.0, std::abs(k));
}

bool finite(const LsvParams& p) {
  for (double x : {p.s0, p.v0, p.alpha, p.kappa, p.theta, p.eta, p.rho, p.vol_floor,
                   p.vol_cap, p.t0, p.t_end, p.dt}) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

LsvParams reference_params() { return LsvParams{}; }

std::vector<std::string> validate(const LsvParams& p) {
  std::vector<std::string> errors;
  if (!finite(p)) {
    errors.emplace_back("non-finite parameter");
    return errors;
  }
  if (!(p.s0 > 0)) errors.emplace_back("s0 must be positive");
  if (!(p.v0 >= 0)) errors.emplace_back("v0 must be non-negative");
  if (!(p.kappa >= 0)) errors.emplace_back("kappa must be non-negative");
  if (!(p.theta >= 0)) errors.emplace_back("theta must be non-negative");
  if (!(p.eta >= 0)) errors.emplace_back("eta must be non-negative");
  if (!(p.rho >= -1 && p.rho <= 1)) errors.emplace_back("correlation out of range");
  if (!(p.vol_floor > 0 && p.vol_floor < p.vol_cap))
    errors.emplace_back("volatility clamp requires 0 < vol_floor < vol_cap");
  if (!(p.t0 >= 0 && p.t0 < p.t_end)) errors.emplace_back("window requires 0 <= t0 < t_end");
  if (!(p.dt > 0)) {
    errors.emplace_back("dt must be positive");
    return errors;
  }
  if (!on_grid(p.t0, p.dt)) errors.emplace_back("t0 not on grid");
  if (p.t_end > p.t0 && !on_grid(p.t_end - p.t0, p.dt))
    errors.emplace_back("window t_end - t0 not on grid");
  return errors;
}

void require_valid(const LsvParams& p) {
  const auto errors = validate(p);
  if (errors.empty()) return;
  std::ostringstream os;
  os << "invalid model parameters:";
  for (const auto& e : errors) os << ' ' << e << ';';
  throw InvalidInput(os.str());
}

double effective_vol(const LsvParams& p, double s, double v) {
  if (!std::isfinite(s) || !std::isfinite(v) || !(s > 0))
    throw InvalidInput("effective_vol: non-finite or non-positive input");
  const double raw = std::sqrt(std::max(v, 0.0)) * std::pow(s / p.s0, p.alpha - 1.0);
  return std::clamp(raw, p.vol_floor, p.vol_cap);
}

std::size_t steps_to(double t, double dt) {
  if (!on_grid(t, dt)) throw InvalidInput("time is not a multiple of dt");
  return static_cast<std::size_t>(std::llround(t / dt));
}

TimeGrid make_grid(const LsvParams& p) {
  require_valid(p);
  TimeGrid g;
  g.dt = p.dt;
  g.idx_t0 = steps_to(p.t0, p.dt);
  const std::size_t n_win = steps_to(p.t_end - p.t0, p.dt);
  const std::size_t n = g.idx_t0 + n_win;
  g.times.resize(n + 1);
  for (std::size_t k = 0; k < g.idx_t0; ++k) g.times[k] = static_cast<double>(k) * p.dt;
  for (std::size_t k = g.idx_t0; k <= n; ++k)
    g.times[k] = p.t0 + static_cast<double>(k - g.idx_t0) * p.dt;
  g.times[g.idx_t0] = p.t0;
  g.times[n] = p.t_end;
  return g;
}

}  // namespace vixb
