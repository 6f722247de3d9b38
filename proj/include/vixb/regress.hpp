#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vixb/model.hpp"
#include "vixb/parallel.hpp"
#include "vixb/simulate.hpp"

namespace vixb {

/// Bivariate polynomial bases in the regression coordinates
/// x = log(s / s0), y = sqrt(max(v, 0)).
///
/// Monomials are ordered by total degree, then by decreasing power of x:
///   1, x, y, x^2, xy, y^2, x^3, ...
/// psi terms model E(R | F_t0); phi terms multiply (sigma, eta/2) . dW at
/// each window step to model the martingale increment.
///
/// Shared: one coefficient per phi term on the scalar
///   sigma dW^S + (eta/2) dW^V.
/// Split: phi is vector valued, one coefficient per term on sigma dW^S and
/// another on (eta/2) dW^V. The martingale part of E(R | F_t) loads on the
/// two increments through different partial derivatives, which the shared
/// form cannot represent.
enum class PhiForm { Shared, Split };

struct BasisSpec {
  int psi_degree = 3;
  int phi_degree = 2;
  bool standardize = true;
  PhiForm phi_form = PhiForm::Split;

  std::size_t psi_count() const { return monomial_count(psi_degree); }
  std::size_t phi_count() const { return monomial_count(phi_degree); }
  /// Design columns per window step.
  std::size_t phi_columns() const { return phi_count() * (phi_form == PhiForm::Split ? 2 : 1); }
  std::size_t width(std::size_t n_steps) const { return psi_count() + phi_columns() * n_steps; }

  static std::size_t monomial_count(int degree) {
    return degree < 0 ? 0 : static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
  }
};

inline BasisSpec lower_degree_basis() { return {3, 2, true, PhiForm::Split}; }
inline BasisSpec higher_degree_basis() { return {4, 3, true, PhiForm::Split}; }

const char* phi_form_name(PhiForm f);
/// "shared" or "split"; throws InvalidInput otherwise.
PhiForm parse_phi_form(const std::string& name);

/// Appends all monomials of total degree <= degree at (x, y) to out.
void eval_monomials(int degree, double x, double y, std::vector<double>& out);

struct ColumnStats {
  std::vector<double> offset;  // subtracted before scaling (0 for the constant column)
  std::vector<double> scale;
};

struct RegressionFit {
  BasisSpec basis;
  std::size_t n_steps = 0;
  std::vector<double> beta;   // psi_count coefficients, raw coordinates
  std::vector<double> gamma;  // [step l][phi column j], raw coordinates
  ColumnStats column_stats;
  std::vector<std::size_t> dropped_columns;  // design-column indices fitted as 0
  double residual_rms = 0.0;
  std::size_t n_used = 0;
  std::size_t n_rejected = 0;

  double gamma_at(std::size_t l, std::size_t j) const { return gamma[l * basis.phi_columns() + j]; }
};

/// Full-width design row: psi terms at t0, then for each step l
///   shared: phi_j(x_l, y_l) (sigma(s_l, v_l) dW^S_l + eta/2 dW^V_l)   j = 1..q
///   split:  phi_j(x_l, y_l) sigma(s_l, v_l) dW^S_l for j = 1..q, then
///           phi_j(x_l, y_l) eta/2 dW^V_l for j = 1..q
std::vector<double> design_row(const BasisSpec& basis, const LsvParams& p, const PathWindow& w);

/// Joint least-squares fit of R on the psi and phi-increment columns.
/// Rank-revealing (column-pivoted Householder) QR after optional column
/// standardization; columns with norm below 1e-10 of the largest, or beyond
/// the numerical rank, are dropped and recorded. Coefficients are returned
/// in raw coordinates, so standardization does not change predictions.
RegressionFit fit_lsmc(const PathBatch& batch, const BasisSpec& basis, const Exec& exec = {});

/// Unclamped Psi-hat(s, v).
double predict_x_raw(const RegressionFit& fit, const LsvParams& p, double s_t0, double v_t0);

/// Clamp a raw conditional-variance estimate to [100^2 floor^2, 100^2 cap^2].
double clamp_x(const LsvParams& p, double raw);

/// clamp_x(predict_x_raw(...)): the X-hat used by the bounds.
double predict_x(const RegressionFit& fit, const LsvParams& p, double s_t0, double v_t0);

/// Sum over window steps of Phi-hat_l(s_l, v_l) . dW_l on one (fresh) path.
double predict_mart_increment(const RegressionFit& fit, const LsvParams& p, const PathWindow& w);

std::vector<double> predict_x_batch(const RegressionFit& fit, const PathBatch& b,
                                    const Exec& exec = {});
std::vector<double> predict_mart_batch(const RegressionFit& fit, const PathBatch& b,
                                       const Exec& exec = {});

/// In-sample residuals R - fitted values, in path order.
std::vector<double> residuals(const RegressionFit& fit, const PathBatch& b, const Exec& exec = {});

/// max over retained columns of |a_j . r| / (|a_j| |r|), the residual
/// orthogonality defect of a fit on its own training batch.
double residual_orthogonality(const RegressionFit& fit, const PathBatch& b, const Exec& exec = {});

// Plain-text coefficient file:
//   vixb-fit 1
//   psi_degree <int>
//   phi_degree <int>
//   standardize <0|1>
//   phi_form <shared|split>
//   n_steps <n>
//   residual_rms <x>  n_used <n>  n_rejected <n>   (one key per line)
//   dropped <k> <idx...>
//   offset <width> <values...>
//   scale <width> <values...>
//   beta <p> <values...>
//   gamma <step> <columns per step> <values...>   (one line per window step)
// Numbers are written with 17 significant digits.
inline constexpr int kFitFileVersion = 1;
void write_fit(const std::filesystem::path& file, const RegressionFit& fit);
RegressionFit read_fit(const std::filesystem::path& file);

}  // namespace vixb
