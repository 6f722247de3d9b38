#include <algorithm>
#include <cmath>

#include "vixb/kernels.hpp"
#include "vixb/rng.hpp"

namespace vixb::kernels {
namespace {

void icdf_scalar(std::size_t n, const double* u, double* z) {
  for (std::size_t i = 0; i < n; ++i) z[i] = vixb::normal_icdf(u[i]);
}

inline double sigma_of(const StepCoeffs& c, double s, double v_plus) {
  const double raw = std::sqrt(v_plus) * std::exp(c.alpha_minus_one * std::log(s / c.s0));
  return std::min(std::max(raw, c.vol_floor), c.vol_cap);
}

void vol_scalar(const StepCoeffs& c, std::size_t n, const double* s, const double* v,
                double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = sigma_of(c, s[i], std::max(v[i], 0.0));
}

void step_scalar(const StepCoeffs& c, std::size_t n, double* s, double* v, const double* z1,
                 const double* z2, double* dw_s, double* dw_v, double* sigma2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double vp = std::max(v[i], 0.0);
    const double sig = sigma_of(c, s[i], vp);
    const double dws = c.sqrt_dt * z1[i];
    const double dwv = c.sqrt_dt * (c.rho * z1[i] + c.rho_perp * z2[i]);
    s[i] = s[i] * std::exp(-0.5 * sig * sig * c.dt + sig * dws);
    v[i] = v[i] + c.kappa * (c.theta - vp) * c.dt + c.eta * std::sqrt(vp) * dwv;
    if (dw_s) dw_s[i] = dws;
    if (dw_v) dw_v[i] = dwv;
    if (sigma2) sigma2[i] = sig * sig;
  }
}

}  // namespace

StepCoeffs make_step_coeffs(const LsvParams& p) {
  return StepCoeffs{p.s0,  p.alpha - 1.0, p.kappa, p.theta, p.eta, p.rho,
                    std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho)),
                    p.dt,  std::sqrt(p.dt), p.vol_floor, p.vol_cap};
}

const KernelSet& scalar() {
  static const KernelSet k{"scalar", &icdf_scalar, &vol_scalar, &step_scalar};
  return k;
}

}  // namespace vixb::kernels
