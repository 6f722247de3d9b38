#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vixb/model.hpp"

namespace vixb::kernels {

/// Per-step coefficients of the Euler full-truncation scheme, precomputed
/// from LsvParams.
struct StepCoeffs {
  double s0;
  double alpha_minus_one;
  double kappa;
  double theta;
  double eta;
  double rho;
  double rho_perp;  // sqrt(1 - rho^2)
  double dt;
  double sqrt_dt;
  double vol_floor;
  double vol_cap;
};

StepCoeffs make_step_coeffs(const LsvParams& p);

/// Data-parallel inner loops. Every lane is one path; lanes never interact,
/// so a lane's result does not depend on where it sits in a call.
struct KernelSet {
  const char* name;

  /// z[i] = inverse normal cdf of u[i].
  void (*normal_icdf)(std::size_t n, const double* u, double* z);

  /// out[i] = clamp(sqrt(max(v,0)) (s/s0)^(alpha-1), floor, cap).
  void (*effective_vol)(const StepCoeffs& c, std::size_t n, const double* s, const double* v,
                        double* out);

  /// One Euler full-truncation step, in place on (s, v):
  ///   sigma  = effective_vol(s, v)            (left endpoint)
  ///   dws    = sqrt_dt z1
  ///   dwv    = sqrt_dt (rho z1 + rho_perp z2)
  ///   s     <- s exp(-sigma^2 dt / 2 + sigma dws)
  ///   v     <- v + kappa (theta - v+) dt + eta sqrt(v+) dwv
  /// dw_s, dw_v and sigma2 (= sigma^2) are written when non-null.
  void (*euler_step)(const StepCoeffs& c, std::size_t n, double* s, double* v, const double* z1,
                     const double* z2, double* dw_s, double* dw_v, double* sigma2);
};

const KernelSet& scalar();

/// AVX2+FMA variant, or nullptr when not compiled in or the CPU lacks it.
const KernelSet* avx2();

/// "auto" (best available), "scalar" or "avx2". Throws InvalidInput for an
/// unknown or unavailable name.
const KernelSet& select(std::string_view name);

/// Names usable with select() on this machine.
std::vector<std::string_view> available();

}  // namespace vixb::kernels
