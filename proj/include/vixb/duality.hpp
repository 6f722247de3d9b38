#pragma once

#include <functional>
#include <span>
#include <vector>

namespace vixb {

/// Concave f on [domain_lo, domain_hi] with its concave conjugate
/// f*(y) = inf_x (x y - f(x)). When `conjugate` is empty it is approximated
/// by minimising over a uniform x grid on the domain (which must be finite).
struct ConcaveFunction {
  std::function<double(double)> f;
  std::function<double(double)> conjugate;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
};

/// sqrt on [0, inf): f*(y) = -1/(4y) for y > 0, -inf otherwise.
ConcaveFunction sqrt_function();

/// min(sqrt(x), K) on [0, inf): f*(y) = -1/(4y) for 2yK >= 1, K^2 y - K for
/// 0 <= y < 1/(2K), -inf for y < 0.
ConcaveFunction capped_sqrt_function(double k);

struct DualityGapReport {
  double reference = 0.0;     // f(E H), the trivial-sigma-field value
  std::vector<double> gaps;   // E(yH - f*(y)) - reference, per candidate y
  double min_gap = 0.0;
  double argmin_y = 0.0;
  bool all_nonnegative = true;
};

/// Checks the dual representation E f(E(H|F)) = inf_Y E(YH - f*(Y)) on a
/// case where F is trivial, so that the left side is f(mean of h_samples)
/// with the samples taken as equally likely outcomes. Throws InvalidInput if
/// the midpoint concavity test fails on a grid spanning the samples.
DualityGapReport duality_gap_check(const ConcaveFunction& f, std::span<const double> h_samples,
                                   std::span<const double> y_values);

}  // namespace vixb
