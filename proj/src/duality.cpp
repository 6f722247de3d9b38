#include "vixb/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vixb/error.hpp"
#include "vixb/parallel.hpp"

namespace vixb {
namespace {

constexpr int kConcavityGrid = 256;
constexpr int kConjugateGrid = 20000;

void check_concave(const ConcaveFunction& fn, double lo, double hi) {
  if (!(hi > lo)) {
    lo = std::max(fn.domain_lo, 0.5 * lo);
    hi = std::min(fn.domain_hi, 2.0 * hi + 1.0);
  }
  const double h = (hi - lo) / kConcavityGrid;
  for (int i = 0; i + 2 <= kConcavityGrid; ++i) {
    const double a = lo + i * h;
    const double b = lo + (i + 2) * h;
    const double fa = fn.f(a), fb = fn.f(b), fm = fn.f(0.5 * (a + b));
    const double tol = 1e-12 * std::max({1.0, std::abs(fa), std::abs(fb)});
    if (fm < 0.5 * (fa + fb) - tol)
      throw InvalidInput("duality_gap_check: function is not concave on the evaluation grid");
  }
}

double grid_conjugate(const ConcaveFunction& fn, double y) {
  if (!std::isfinite(fn.domain_lo) || !std::isfinite(fn.domain_hi))
    throw InvalidInput("duality_gap_check: grid conjugate needs a finite domain");
  double best = std::numeric_limits<double>::infinity();
  const double h = (fn.domain_hi - fn.domain_lo) / kConjugateGrid;
  for (int i = 0; i <= kConjugateGrid; ++i) {
    const double x = fn.domain_lo + i * h;
    best = std::min(best, x * y - fn.f(x));
  }
  return best;
}

}  // namespace

ConcaveFunction sqrt_function() {
  return ConcaveFunction{[](double x) { return std::sqrt(x); },
                         [](double y) {
                           return y > 0 ? -1.0 / (4.0 * y)
                                        : -std::numeric_limits<double>::infinity();
                         },
                         0.0,
                         std::numeric_limits<double>::infinity()};
}

ConcaveFunction capped_sqrt_function(double k) {
  if (!(k > 0)) throw InvalidInput("capped_sqrt_function: K must be positive");
  return ConcaveFunction{[k](double x) { return std::min(std::sqrt(x), k); },
                         [k](double y) {
                           if (y < 0) return -std::numeric_limits<double>::infinity();
                           return 2.0 * y * k >= 1.0 ? -1.0 / (4.0 * y) : k * k * y - k;
                         },
                         0.0, std::numeric_limits<double>::infinity()};
}

DualityGapReport duality_gap_check(const ConcaveFunction& fn, std::span<const double> h,
                                   std::span<const double> y_values) {
  if (h.empty() || y_values.empty())
    throw InvalidInput("duality_gap_check: need samples and candidate y values");
  const auto [lo_it, hi_it] = std::minmax_element(h.begin(), h.end());
  check_concave(fn, *lo_it, *hi_it);

  DualityGapReport rep;
  const double mean_h = mean(h);
  rep.reference = fn.f(mean_h);
  rep.min_gap = std::numeric_limits<double>::infinity();
  const double tol = 1e-12 * std::max(1.0, std::abs(rep.reference));
  for (double y : y_values) {
    const double conj = fn.conjugate ? fn.conjugate(y) : grid_conjugate(fn, y);
    // E(yH - f*(y)) with y deterministic
    const double gap = y * mean_h - conj - rep.reference;
    rep.gaps.push_back(gap);
    if (gap < rep.min_gap) {
      rep.min_gap = gap;
      rep.argmin_y = y;
    }
    if (gap < -tol) rep.all_nonnegative = false;
  }
  return rep;
}

}  // namespace vixb
