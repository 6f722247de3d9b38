#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace vixb {

/// Monte Carlo estimate with its standard error and 95% half-width.
struct BoundEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double ci_half = 0.0;  // 1.96 * std_error
  std::size_t n_used = 0;
};

inline constexpr double kCiMultiplier = 1.96;

BoundEstimate make_estimate(double value, double std_error, std::size_t n);

/// x y + 1/(4y): majorises sqrt(x) for every y > 0, equal at y = 1/(2 sqrt x).
double legendre_sqrt(double x, double y);

/// x y + 1/(4y) 1(2yK >= 1) + (K - K^2 y) 1(2yK < 1): majorises min(sqrt x, K)
/// for y >= 0, equal at y = 1(x <= K^2) / (2 sqrt x).
double legendre_cap(double x, double y, double k);

/// Sample mean with standard error sd / sqrt(n).
BoundEstimate estimate_mean(std::span<const double> terms);

/// mean(terms) + sign * sqrt(mean(penalty)), sign in {-1, +1}. The standard
/// error comes from the first-order delta method with the joint sample
/// covariance of the two per-path terms.
BoundEstimate estimate_with_penalty(std::span<const double> terms,
                                    std::span<const double> penalty, double sign);

/// Per-path terms of the estimators, exposed for assembly and testing.
namespace terms {
/// R / (2 sqrt X) + sqrt(X) / 2
std::vector<double> upper_future(std::span<const double> r, std::span<const double> x_hat);
/// upper_future term if X <= K^2, else K
std::vector<double> upper_cap(std::span<const double> r, std::span<const double> x_hat,
                              double k);
/// sqrt((R - M)^+)
std::vector<double> lower_future(std::span<const double> r, std::span<const double> m_hat);
/// min(sqrt((R - M)^+), K)
std::vector<double> lower_cap(std::span<const double> r, std::span<const double> m_hat,
                              double k);
/// (sqrt(max(R, M)) - sqrt(R))^2
std::vector<double> penalty(std::span<const double> r, std::span<const double> m_hat);
}  // namespace terms

BoundEstimate upper_future(std::span<const double> r, std::span<const double> x_hat);
BoundEstimate lower_future(std::span<const double> r, std::span<const double> m_hat);
BoundEstimate upper_cap(std::span<const double> r, std::span<const double> x_hat, double k);
BoundEstimate lower_cap(std::span<const double> r, std::span<const double> m_hat, double k);

struct JensenBounds {
  BoundEstimate vol_swap;       // E sqrt(R)
  BoundEstimate sqrt_var_swap;  // sqrt(E R)
};

JensenBounds jensen_bounds(std::span<const double> r);

/// One method's estimates across instruments; per-strike vectors align with
/// DerivativeTable::strikes.
struct TableColumn {
  BoundEstimate future;
  std::vector<BoundEstimate> cap, call, put, swap;
};

/// Column priced from a per-path estimate of E(R | F_t0): future = mean sqrt(x),
/// cap = mean min(sqrt(x), K), call = future - cap, put = K - cap,
/// swap = future - K. Used for plain LSMC (x = X-hat) and the nested oracle.
TableColumn conditional_column(std::span<const double> x, std::span<const double> strikes);

/// Classic least-squares Monte Carlo estimates from the clamped regression fit.
TableColumn plain_lsmc_estimates(std::span<const double> x_hat, std::span<const double> strikes);

struct DerivativeTable {
  std::vector<double> strikes;
  TableColumn lower, upper, plain;
  std::optional<TableColumn> oracle;
  JensenBounds jensen;
};

/// Per-path inputs of the bound estimators, all from the same evaluation batch.
struct BoundInputs {
  std::span<const double> r;      // realised variance
  std::span<const double> x_hat;  // clamped X-hat
  std::span<const double> m_hat;  // M-hat_T
};

/// Lower/upper columns via
///   call_up = future_up - cap_lo,   call_lo = future_lo - cap_up,
///   put_up  = K - cap_lo,           put_lo  = K - cap_up,
///   swap    = future - K.
/// Values are exact differences of the stored estimates; standard errors of
/// differences come from per-path differences on the shared batch.
DerivativeTable assemble(const BoundInputs& in, std::span<const double> strikes,
                         std::optional<TableColumn> oracle = std::nullopt);

/// Swap estimate future - K (same standard error).
BoundEstimate swap_from_future(const BoundEstimate& future, double k);

}  // namespace vixb
