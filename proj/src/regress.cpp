#include "vixb/regress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "vixb/error.hpp"

namespace vixb {
namespace {

constexpr double kDropTol = 1e-10;
constexpr double kMaxRejectFraction = 1e-3;
constexpr std::size_t kRowBlock = 256;

// sigma(s, v) without the argument checks of effective_vol; NaN on bad input
// so that the caller can reject the path.
double sigma_or_nan(const LsvParams& p, double s, double v) {
  if (!(s > 0) || !std::isfinite(s) || !std::isfinite(v)) return std::nan("");
  const double raw = std::sqrt(std::max(v, 0.0)) * std::pow(s / p.s0, p.alpha - 1.0);
  return std::clamp(raw, p.vol_floor, p.vol_cap);
}

double coord_x(const LsvParams& p, double s) { return std::log(s / p.s0); }
double coord_y(double v) { return std::sqrt(std::max(v, 0.0)); }

void check_basis(const BasisSpec& basis) {
  if (basis.psi_degree < 0 || basis.phi_degree < 0)
    throw InvalidInput("basis degrees must be non-negative");
}

void check_fit_matches(const RegressionFit& fit, std::size_t n_steps) {
  if (fit.n_steps != n_steps)
    throw InvalidInput("regression fit was built for a different number of window steps");
}

// Raw design-space dot product a(path) . coef for a full-width coefficient vector.
double fitted_value(const BasisSpec& basis, const LsvParams& p, const PathWindow& w,
                    std::span<const double> coef) {
  const auto row = design_row(basis, p, w);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * coef[j];
  return acc;
}

std::vector<double> full_coefficients(const RegressionFit& fit) {
  std::vector<double> c(fit.beta);
  c.insert(c.end(), fit.gamma.begin(), fit.gamma.end());
  return c;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* phi_form_name(PhiForm f) { return f == PhiForm::Shared ? "shared" : "split"; }

PhiForm parse_phi_form(const std::string& name) {
  if (name == "shared") return PhiForm::Shared;
  if (name == "split") return PhiForm::Split;
  throw InvalidInput("phi form must be shared or split, got '" + name + "'");
}

void eval_monomials(int degree, double x, double y, std::vector<double>& out) {
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) {
      double term = 1.0;
      for (int i = 0; i < a; ++i) term *= x;
      for (int i = 0; i < d - a; ++i) term *= y;
      out.push_back(term);
    }
  }
}

std::vector<double> design_row(const BasisSpec& basis, const LsvParams& p, const PathWindow& w) {
  check_basis(basis);
  const std::size_t n = w.dw_s.size();
  std::vector<double> row;
  row.reserve(basis.width(n));
  eval_monomials(basis.psi_degree, coord_x(p, w.s[0]), coord_y(w.v[0]), row);
  std::vector<double> phi;
  phi.reserve(basis.phi_count());
  const double half_eta = 0.5 * p.eta;
  for (std::size_t l = 0; l < n; ++l) {
    phi.clear();
    eval_monomials(basis.phi_degree, coord_x(p, w.s[l]), coord_y(w.v[l]), phi);
    const double ds = sigma_or_nan(p, w.s[l], w.v[l]) * w.dw_s[l];
    const double dv = half_eta * w.dw_v[l];
    if (basis.phi_form == PhiForm::Shared) {
      for (double f : phi) row.push_back(f * (ds + dv));
    } else {
      for (double f : phi) row.push_back(f * ds);
      for (double f : phi) row.push_back(f * dv);
    }
  }
  return row;
}

RegressionFit fit_lsmc(const PathBatch& batch, const BasisSpec& basis, const Exec& exec) {
  check_basis(basis);
  const LsvParams& p = batch.params;
  const std::size_t n_steps = batch.n_window;
  const std::size_t width = basis.width(n_steps);
  const std::size_t n_paths = batch.n_paths;
  if (n_paths < 10 * width)
    throw InvalidInput("fit_lsmc: underdetermined system, need at least " +
                       std::to_string(10 * width) + " paths for " + std::to_string(width) +
                       " design columns");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(width));
  std::vector<char> ok(n_paths, 1);
  parallel_blocks(n_paths, kRowBlock, exec.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = design_row(basis, p, batch.path(i));
      bool finite = std::isfinite(batch.realised_var[i]);
      for (std::size_t j = 0; j < width; ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
        finite = finite && std::isfinite(row[j]);
      }
      ok[i] = finite ? 1 : 0;
    }
  });

  std::vector<std::size_t> rows;
  rows.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i)
    if (ok[i]) rows.push_back(i);
  const std::size_t n_rejected = n_paths - rows.size();
  if (static_cast<double>(n_rejected) > kMaxRejectFraction * static_cast<double>(n_paths))
    throw NumericalError("fit_lsmc: " + std::to_string(n_rejected) +
                         " paths produced non-finite design entries");
  const auto n_used = static_cast<Eigen::Index>(rows.size());
  Eigen::VectorXd y(n_used);
  for (Eigen::Index r = 0; r < n_used; ++r) y(r) = batch.realised_var[rows[static_cast<std::size_t>(r)]];
  if (n_rejected > 0) {
    for (Eigen::Index r = 0; r < n_used; ++r)
      a.row(r) = a.row(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]));
    a.conservativeResize(n_used, Eigen::NoChange);
  }

  RegressionFit fit;
  fit.basis = basis;
  fit.n_steps = n_steps;
  fit.n_used = rows.size();
  fit.n_rejected = n_rejected;
  fit.column_stats.offset.assign(width, 0.0);
  fit.column_stats.scale.assign(width, 1.0);

  // Column 0 is the constant psi term; centring the others leaves the span unchanged.
  std::vector<double> norms(width);
  for (std::size_t j = 0; j < width; ++j) {
    auto col = a.col(static_cast<Eigen::Index>(j));
    double off = 0.0;
    if (basis.standardize && j != 0) off = col.mean();
    const double nrm = (col.array() - off).matrix().norm();
    norms[j] = nrm;
    if (basis.standardize) {
      fit.column_stats.offset[j] = off;
      fit.column_stats.scale[j] = nrm > 0 ? nrm / std::sqrt(static_cast<double>(n_used)) : 1.0;
    }
  }
  const double max_norm = *std::max_element(norms.begin(), norms.end());
  if (!(max_norm > 0)) throw NumericalError("fit_lsmc: all design columns are degenerate");

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < width; ++j) {
    if (norms[j] < kDropTol * max_norm)
      fit.dropped_columns.push_back(j);
    else
      kept.push_back(j);
  }
  if (kept.empty() || kept.front() != 0)
    throw NumericalError("fit_lsmc: constant column is degenerate");

  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(kept[k]);
    const double off = fit.column_stats.offset[kept[k]];
    const double sc = fit.column_stats.scale[kept[k]];
    a.col(static_cast<Eigen::Index>(k)) = (a.col(j).array() - off) / sc;
  }
  const auto n_kept = static_cast<Eigen::Index>(kept.size());
  a.conservativeResize(Eigen::NoChange, n_kept);

  Eigen::ColPivHouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(a);
  qr.setThreshold(kDropTol);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) throw NumericalError("fit_lsmc: design matrix has numerical rank 0");
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = rank; k < n_kept; ++k)
    fit.dropped_columns.push_back(kept[static_cast<std::size_t>(perm(k))]);
  std::sort(fit.dropped_columns.begin(), fit.dropped_columns.end());
  bool constant_in_rank = false;
  for (Eigen::Index k = 0; k < rank; ++k)
    constant_in_rank = constant_in_rank || kept[static_cast<std::size_t>(perm(k))] == 0;
  if (!constant_in_rank)
    throw NumericalError("fit_lsmc: constant column fell outside the numerical rank");

  // Least-squares solve restricted to the first `rank` pivoted columns.
  auto solve_std = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd qtb = qr.householderQ().adjoint() * rhs;
    Eigen::VectorXd z = qr.matrixQR()
                            .topLeftCorner(rank, rank)
                            .triangularView<Eigen::Upper>()
                            .solve(qtb.head(rank));
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_kept);
    for (Eigen::Index k = 0; k < rank; ++k) c(perm(k)) = z(k);
    return c;
  };
  auto to_raw = [&](const Eigen::VectorXd& c) {
    std::vector<double> raw(width, 0.0);
    double intercept_shift = 0.0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const std::size_t j = kept[k];
      const double cj = c(static_cast<Eigen::Index>(k)) / fit.column_stats.scale[j];
      raw[j] = cj;
      intercept_shift += cj * fit.column_stats.offset[j];
    }
    raw[0] -= intercept_shift;
    return raw;
  };
  auto raw_residuals = [&](std::span<const double> coef) {
    Eigen::VectorXd r(n_used);
    parallel_blocks(rows.size(), kRowBlock, exec.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k)
        r(static_cast<Eigen::Index>(k)) =
            batch.realised_var[rows[k]] - fitted_value(basis, p, batch.path(rows[k]), coef);
    });
    return r;
  };

  Eigen::VectorXd c = solve_std(y);
  std::vector<double> raw = to_raw(c);
  // One step of iterative refinement against residuals in raw coordinates.
  Eigen::VectorXd r = raw_residuals(raw);
  c += solve_std(r);
  raw = to_raw(c);
  r = raw_residuals(raw);

  const std::size_t n_psi = basis.psi_count();
  fit.beta.assign(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(n_psi));
  fit.gamma.assign(raw.begin() + static_cast<std::ptrdiff_t>(n_psi), raw.end());
  fit.residual_rms = std::sqrt(r.squaredNorm() / static_cast<double>(n_used));
  return fit;
}

double predict_x_raw(const RegressionFit& fit, const LsvParams& p, double s_t0, double v_t0) {
  std::vector<double> psi;
  psi.reserve(fit.beta.size());
  eval_monomials(fit.basis.psi_degree, coord_x(p, s_t0), coord_y(v_t0), psi);
  double acc = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) acc += fit.beta[j] * psi[j];
  return acc;
}

double clamp_x(const LsvParams& p, double raw) {
  const double lo = 1e4 * p.vol_floor * p.vol_floor;
  const double hi = 1e4 * p.vol_cap * p.vol_cap;
  if (std::isnan(raw)) return lo;
  return std::clamp(raw, lo, hi);
}

double predict_x(const RegressionFit& fit, const LsvParams& p, double s_t0, double v_t0) {
  return clamp_x(p, predict_x_raw(fit, p, s_t0, v_t0));
}

double predict_mart_increment(const RegressionFit& fit, const LsvParams& p, const PathWindow& w) {
  check_fit_matches(fit, w.dw_s.size());
  const std::size_t q = fit.basis.phi_count();
  std::vector<double> phi;
  phi.reserve(q);
  const double half_eta = 0.5 * p.eta;
  double total = 0.0;
  for (std::size_t l = 0; l < fit.n_steps; ++l) {
    phi.clear();
    eval_monomials(fit.basis.phi_degree, coord_x(p, w.s[l]), coord_y(w.v[l]), phi);
    double cs = 0.0, cv = 0.0;
    for (std::size_t j = 0; j < q; ++j) cs += fit.gamma_at(l, j) * phi[j];
    if (fit.basis.phi_form == PhiForm::Shared) {
      cv = cs;
    } else {
      for (std::size_t j = 0; j < q; ++j) cv += fit.gamma_at(l, q + j) * phi[j];
    }
    if (cs != 0.0) total += cs * sigma_or_nan(p, w.s[l], w.v[l]) * w.dw_s[l];
    if (cv != 0.0) total += cv * half_eta * w.dw_v[l];
  }
  return total;
}

std::vector<double> predict_x_batch(const RegressionFit& fit, const PathBatch& b,
                                    const Exec& exec) {
  std::vector<double> x(b.n_paths);
  parallel_blocks(b.n_paths, 4096, exec.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) x[i] = predict_x(fit, b.params, b.s_t0(i), b.v_t0(i));
  });
  return x;
}

std::vector<double> predict_mart_batch(const RegressionFit& fit, const PathBatch& b,
                                       const Exec& exec) {
  check_fit_matches(fit, b.n_window);
  std::vector<double> m(b.n_paths);
  parallel_blocks(b.n_paths, 1024, exec.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) m[i] = predict_mart_increment(fit, b.params, b.path(i));
  });
  return m;
}

std::vector<double> residuals(const RegressionFit& fit, const PathBatch& b, const Exec& exec) {
  check_fit_matches(fit, b.n_window);
  const auto coef = full_coefficients(fit);
  std::vector<double> r(b.n_paths);
  parallel_blocks(b.n_paths, kRowBlock, exec.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      r[i] = b.realised_var[i] - fitted_value(fit.basis, b.params, b.path(i), coef);
  });
  return r;
}

double residual_orthogonality(const RegressionFit& fit, const PathBatch& b, const Exec& exec) {
  const auto r = residuals(fit, b, exec);
  const std::size_t width = fit.basis.width(fit.n_steps);
  std::vector<double> dots(width, 0.0), sq(width, 0.0);
  double rr = 0.0;
  for (std::size_t i = 0; i < b.n_paths; ++i) {
    const auto row = design_row(fit.basis, b.params, b.path(i));
    if (!std::isfinite(r[i])) continue;
    for (std::size_t j = 0; j < width; ++j) {
      dots[j] += row[j] * r[i];
      sq[j] += row[j] * row[j];
    }
    rr += r[i] * r[i];
  }
  const double rnorm = std::sqrt(rr);
  double worst = 0.0;
  for (std::size_t j = 0; j < width; ++j) {
    if (std::binary_search(fit.dropped_columns.begin(), fit.dropped_columns.end(), j)) continue;
    const double denom = std::sqrt(sq[j]) * rnorm;
    if (denom > 0) worst = std::max(worst, std::abs(dots[j]) / denom);
  }
  return worst;
}

void write_fit(const std::filesystem::path& file, const RegressionFit& fit) {
  std::ofstream os(file);
  if (!os) throw InvalidInput("cannot open " + file.string() + " for writing");
  auto list = [&](const char* key, std::span<const double> xs) {
    os << key << ' ' << xs.size();
    for (double x : xs) os << ' ' << fmt17(x);
    os << '\n';
  };
  os << "vixb-fit " << kFitFileVersion << '\n';
  os << "psi_degree " << fit.basis.psi_degree << '\n';
  os << "phi_degree " << fit.basis.phi_degree << '\n';
  os << "standardize " << (fit.basis.standardize ? 1 : 0) << '\n';
  os << "phi_form " << phi_form_name(fit.basis.phi_form) << '\n';
  os << "n_steps " << fit.n_steps << '\n';
  os << "residual_rms " << fmt17(fit.residual_rms) << '\n';
  os << "n_used " << fit.n_used << '\n';
  os << "n_rejected " << fit.n_rejected << '\n';
  os << "dropped " << fit.dropped_columns.size();
  for (auto j : fit.dropped_columns) os << ' ' << j;
  os << '\n';
  list("offset", fit.column_stats.offset);
  list("scale", fit.column_stats.scale);
  list("beta", fit.beta);
  const std::size_t q = fit.basis.phi_columns();
  for (std::size_t l = 0; l < fit.n_steps; ++l) {
    os << "gamma " << l << ' ' << q;
    for (std::size_t j = 0; j < q; ++j) os << ' ' << fmt17(fit.gamma_at(l, j));
    os << '\n';
  }
  if (!os) throw InvalidInput("write failed for " + file.string());
}

RegressionFit read_fit(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw InvalidInput("cannot open " + file.string());
  auto fail = [&](const std::string& what) -> void {
    throw InvalidInput(file.string() + ": " + what);
  };
  std::string key;
  int version = 0;
  if (!(is >> key >> version) || key != "vixb-fit") fail("not a coefficient file");
  if (version != kFitFileVersion) fail("unsupported version " + std::to_string(version));

  RegressionFit fit;
  auto expect = [&](const char* want) {
    if (!(is >> key) || key != want) fail(std::string("expected key '") + want + "'");
  };
  auto read_list = [&](const char* want, std::vector<double>& out) {
    expect(want);
    std::size_t n = 0;
    if (!(is >> n)) fail(std::string("bad length for ") + want);
    out.resize(n);
    for (auto& x : out)
      if (!(is >> x)) fail(std::string("bad value in ") + want);
  };
  int standardize = 1;
  expect("psi_degree");
  is >> fit.basis.psi_degree;
  expect("phi_degree");
  is >> fit.basis.phi_degree;
  expect("standardize");
  is >> standardize;
  fit.basis.standardize = standardize != 0;
  expect("phi_form");
  std::string form;
  is >> form;
  if (form != "shared" && form != "split") fail("unknown phi_form '" + form + "'");
  fit.basis.phi_form = parse_phi_form(form);
  expect("n_steps");
  is >> fit.n_steps;
  expect("residual_rms");
  is >> fit.residual_rms;
  expect("n_used");
  is >> fit.n_used;
  expect("n_rejected");
  is >> fit.n_rejected;
  expect("dropped");
  std::size_t n_dropped = 0;
  is >> n_dropped;
  fit.dropped_columns.resize(n_dropped);
  for (auto& j : fit.dropped_columns) is >> j;
  if (!is) fail("malformed header");
  check_basis(fit.basis);
  read_list("offset", fit.column_stats.offset);
  read_list("scale", fit.column_stats.scale);
  read_list("beta", fit.beta);
  const std::size_t q = fit.basis.phi_columns();
  if (fit.beta.size() != fit.basis.psi_count()) fail("beta has the wrong length");
  fit.gamma.assign(fit.n_steps * q, 0.0);
  for (std::size_t l = 0; l < fit.n_steps; ++l) {
    std::size_t step = 0, count = 0;
    expect("gamma");
    if (!(is >> step >> count) || step != l || count != q) fail("bad gamma row header");
    for (std::size_t j = 0; j < q; ++j)
      if (!(is >> fit.gamma[l * q + j])) fail("bad gamma value");
  }
  return fit;
}

}  // namespace vixb
