#include "vixb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vixb/error.hpp"
#include "vixb/parallel.hpp"

namespace vixb {
namespace {

void same_length(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) throw InvalidInput(std::string(what) + ": array lengths differ");
  if (a.empty()) throw InvalidInput(std::string(what) + ": no samples");
}

void check_strike(double k) {
  if (!(k > 0)) throw InvalidInput("strike must be positive");
}

void check_x_hat(std::span<const double> x) {
  for (double xi : x)
    if (!(xi > 0)) throw InvalidInput("X-hat must be positive");
}

// Sample covariance (n - 1 denominator) around the given means, with the
// corrected two-pass term so that rounding in the means cancels: constant
// samples give exactly zero.
double covariance(std::span<const double> a, double ma, std::span<const double> b, double mb) {
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  std::vector<double> da(n), db(n), prod(n);
  for (std::size_t i = 0; i < n; ++i) {
    da[i] = a[i] - ma;
    db[i] = b[i] - mb;
    prod[i] = da[i] * db[i];
  }
  const double nd = static_cast<double>(n);
  const double c = stable_sum(prod) - stable_sum(da) * stable_sum(db) / nd;
  return c / (nd - 1.0);
}

std::vector<double> minus(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

std::vector<double> k_minus(double k, std::span<const double> a) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = k - a[i];
  return d;
}

BoundEstimate with_value(BoundEstimate e, double value) {
  e.value = value;
  return e;
}

}  // namespace

BoundEstimate make_estimate(double value, double std_error, std::size_t n) {
  return BoundEstimate{value, std_error, kCiMultiplier * std_error, n};
}

double legendre_sqrt(double x, double y) {
  if (!(y > 0)) throw InvalidInput("legendre_sqrt: y must be positive");
  return x * y + 1.0 / (4.0 * y);
}

double legendre_cap(double x, double y, double k) {
  if (!(k > 0)) throw InvalidInput("legendre_cap: K must be positive");
  if (!(y >= 0)) throw InvalidInput("legendre_cap: y must be non-negative");
  if (2.0 * y * k >= 1.0) return x * y + 1.0 / (4.0 * y);
  return x * y + (k - k * k * y);
}

BoundEstimate estimate_mean(std::span<const double> t) {
  if (t.empty()) throw InvalidInput("estimate_mean: no samples");
  const double m = mean(t);
  const double var = covariance(t, m, t, m);
  return make_estimate(m, std::sqrt(var / static_cast<double>(t.size())), t.size());
}

BoundEstimate estimate_with_penalty(std::span<const double> t, std::span<const double> pen,
                                    double sign) {
  same_length(t, pen, "estimate_with_penalty");
  const std::size_t n = t.size();
  const double mt = mean(t);
  const double mp = mean(pen);
  const double root = std::sqrt(mp);
  const double value = mt + sign * root;
  double var = covariance(t, mt, t, mt);
  if (root > 0) {
    const double g = sign / (2.0 * root);
    var += g * g * covariance(pen, mp, pen, mp) + 2.0 * g * covariance(t, mt, pen, mp);
  }
  return make_estimate(value, std::sqrt(std::max(var, 0.0) / static_cast<double>(n)), n);
}

namespace terms {

std::vector<double> upper_future(std::span<const double> r, std::span<const double> x_hat) {
  same_length(r, x_hat, "upper_future");
  check_x_hat(x_hat);
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double root = std::sqrt(x_hat[i]);
    out[i] = r[i] / (2.0 * root) + root / 2.0;
  }
  return out;
}

std::vector<double> upper_cap(std::span<const double> r, std::span<const double> x_hat,
                              double k) {
  same_length(r, x_hat, "upper_cap");
  check_x_hat(x_hat);
  check_strike(k);
  const double k2 = k * k;
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (x_hat[i] <= k2) {
      const double root = std::sqrt(x_hat[i]);
      out[i] = r[i] / (2.0 * root) + root / 2.0;
    } else {
      out[i] = k;
    }
  }
  return out;
}

std::vector<double> lower_future(std::span<const double> r, std::span<const double> m_hat) {
  same_length(r, m_hat, "lower_future");
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::sqrt(std::max(r[i] - m_hat[i], 0.0));
  return out;
}

std::vector<double> lower_cap(std::span<const double> r, std::span<const double> m_hat,
                              double k) {
  same_length(r, m_hat, "lower_cap");
  check_strike(k);
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    out[i] = std::min(std::sqrt(std::max(r[i] - m_hat[i], 0.0)), k);
  return out;
}

std::vector<double> penalty(std::span<const double> r, std::span<const double> m_hat) {
  same_length(r, m_hat, "penalty");
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = std::sqrt(std::max(r[i], m_hat[i])) - std::sqrt(r[i]);
    out[i] = d * d;
  }
  return out;
}

}  // namespace terms

BoundEstimate upper_future(std::span<const double> r, std::span<const double> x_hat) {
  return estimate_mean(terms::upper_future(r, x_hat));
}

BoundEstimate lower_future(std::span<const double> r, std::span<const double> m_hat) {
  return estimate_with_penalty(terms::lower_future(r, m_hat), terms::penalty(r, m_hat), -1.0);
}

BoundEstimate upper_cap(std::span<const double> r, std::span<const double> x_hat, double k) {
  return estimate_mean(terms::upper_cap(r, x_hat, k));
}

BoundEstimate lower_cap(std::span<const double> r, std::span<const double> m_hat, double k) {
  return estimate_with_penalty(terms::lower_cap(r, m_hat, k), terms::penalty(r, m_hat), -1.0);
}

JensenBounds jensen_bounds(std::span<const double> r) {
  if (r.empty()) throw InvalidInput("jensen_bounds: no samples");
  std::vector<double> roots(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0)) throw InvalidInput("jensen_bounds: negative realised variance");
    roots[i] = std::sqrt(r[i]);
  }
  JensenBounds out;
  out.vol_swap = estimate_mean(roots);
  const BoundEstimate var_swap = estimate_mean(r);
  const double root = std::sqrt(var_swap.value);
  const double se = root > 0 ? var_swap.std_error / (2.0 * root) : 0.0;
  out.sqrt_var_swap = make_estimate(root, se, r.size());
  return out;
}

BoundEstimate swap_from_future(const BoundEstimate& future, double k) {
  return with_value(future, future.value - k);
}

TableColumn conditional_column(std::span<const double> x, std::span<const double> strikes) {
  if (x.empty()) throw InvalidInput("conditional_column: no samples");
  std::vector<double> roots(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) roots[i] = std::sqrt(std::max(x[i], 0.0));
  TableColumn col;
  col.future = estimate_mean(roots);
  for (double k : strikes) {
    check_strike(k);
    std::vector<double> capped(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) capped[i] = std::min(roots[i], k);
    const BoundEstimate cap = estimate_mean(capped);
    col.cap.push_back(cap);
    col.call.push_back(with_value(estimate_mean(minus(roots, capped)), col.future.value - cap.value));
    col.put.push_back(with_value(cap, k - cap.value));
    col.swap.push_back(swap_from_future(col.future, k));
  }
  return col;
}

TableColumn plain_lsmc_estimates(std::span<const double> x_hat, std::span<const double> strikes) {
  check_x_hat(x_hat);
  return conditional_column(x_hat, strikes);
}

DerivativeTable assemble(const BoundInputs& in, std::span<const double> strikes,
                         std::optional<TableColumn> oracle) {
  same_length(in.r, in.x_hat, "assemble");
  same_length(in.r, in.m_hat, "assemble");
  if (oracle && (oracle->cap.size() != strikes.size() || oracle->call.size() != strikes.size() ||
                 oracle->put.size() != strikes.size()))
    throw InvalidInput("assemble: oracle column strikes do not match the table strikes");

  DerivativeTable t;
  t.strikes.assign(strikes.begin(), strikes.end());
  t.jensen = jensen_bounds(in.r);
  t.plain = plain_lsmc_estimates(in.x_hat, strikes);
  t.oracle = std::move(oracle);

  const auto up_f = terms::upper_future(in.r, in.x_hat);
  const auto lo_f = terms::lower_future(in.r, in.m_hat);
  const auto pen = terms::penalty(in.r, in.m_hat);
  t.upper.future = estimate_mean(up_f);
  t.lower.future = estimate_with_penalty(lo_f, pen, -1.0);

  for (double k : strikes) {
    check_strike(k);
    const auto up_c = terms::upper_cap(in.r, in.x_hat, k);
    const auto lo_c = terms::lower_cap(in.r, in.m_hat, k);
    const BoundEstimate cap_up = estimate_mean(up_c);
    const BoundEstimate cap_lo = estimate_with_penalty(lo_c, pen, -1.0);
    t.upper.cap.push_back(cap_up);
    t.lower.cap.push_back(cap_lo);

    // future_up - cap_lo = mean(up_f - lo_c) + sqrt(mean pen)
    t.upper.call.push_back(with_value(estimate_with_penalty(minus(up_f, lo_c), pen, +1.0),
                                      t.upper.future.value - cap_lo.value));
    // future_lo - cap_up = mean(lo_f - up_c) - sqrt(mean pen)
    t.lower.call.push_back(with_value(estimate_with_penalty(minus(lo_f, up_c), pen, -1.0),
                                      t.lower.future.value - cap_up.value));
    // K - cap_lo = mean(K - lo_c) + sqrt(mean pen)
    t.upper.put.push_back(
        with_value(estimate_with_penalty(k_minus(k, lo_c), pen, +1.0), k - cap_lo.value));
    t.lower.put.push_back(with_value(cap_up, k - cap_up.value));

    t.upper.swap.push_back(swap_from_future(t.upper.future, k));
    t.lower.swap.push_back(swap_from_future(t.lower.future, k));
  }
  return t;
}

}  // namespace vixb
