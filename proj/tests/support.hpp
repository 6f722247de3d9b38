#pragma once

#include <cmath>

#include "vixb/bounds.hpp"
#include "vixb/model.hpp"

namespace vixb::test {

// eta = 0, alpha = 1, v0 = theta: sigma is 0.3 on every path, R = 900.
inline LsvParams deterministic_params() {
  LsvParams p = reference_params();
  p.eta = 0.0;
  p.alpha = 1.0;
  p.v0 = p.theta = 0.09;
  return p;
}

// Half-width of the 95% interval of a difference of two independent estimates.
inline double combined_ci(double a, double b) { return std::sqrt(a * a + b * b); }

inline bool agree(const BoundEstimate& e, double ref, double ref_ci) {
  return std::abs(e.value - ref) <= combined_ci(e.ci_half, ref_ci);
}

}  // namespace vixb::test
