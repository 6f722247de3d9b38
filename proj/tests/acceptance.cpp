// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.
// Full-size runs (1e5 regression paths, 5e5 evaluation paths, a 5e4 x 1e3
// nested oracle, an 11-point sweep), so expect a few minutes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "vixb/bounds.hpp"
#include "vixb/config.hpp"
#include "vixb/duality.hpp"
#include "vixb/experiment.hpp"
#include "vixb/regress.hpp"
#include "vixb/simulate.hpp"
#include "vixb/table_io.hpp"

using namespace vixb;
using test::combined_ci;

namespace {

// Reference values with their 95% half-widths.
struct Ref {
  double value;
  double ci;
};

constexpr Ref kLowerFuture{27.3582, 0.0445};
constexpr Ref kUpperFuture{27.4607, 0.0454};
constexpr Ref kNestedFuture{27.3728, 0.0445};
constexpr double kVolSwap = 27.1018;
constexpr double kSqrtVarSwap = 31.7342;
constexpr double kFutureTol = 0.10;
constexpr double kMaxGapLow = 0.2;
constexpr double kMaxGapHigh = 0.05;

const std::vector<double> kStrikes{15, 20, 25, 30, 35, 40, 45};
const std::vector<Ref> kNestedCall{{13.7302, .0404}, {10.2909, .0367}, {7.4785, .0324},
                                   {5.2738, .0280},  {3.6176, .0236},  {2.4230, .0196},
                                   {1.5912, .0160}};
const std::vector<Ref> kNestedPut{{1.3575, .0079},  {2.9181, .0131},  {5.1057, .0185},
                                  {7.9010, .0236},  {11.2449, .0282}, {15.0502, .0322},
                                  {19.2184, .0354}};

constexpr Ref kRhoLow{27.6457, 0.0471};   // rho = -0.8
constexpr Ref kRhoHigh{26.1158, 0.0355};  // rho = +0.8
constexpr Ref kAlphaOne{26.4738, 0.0392};
constexpr double kMaxGapEta = 0.01;

constexpr double kExactTol = 1e-9;
constexpr double kPropertyTol = 1e-12;
constexpr double kOrthoTol = 1e-8;
constexpr double kDualityTol = 1e-6;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  %d  %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(const BoundEstimate& e, const Ref& r) {
  return std::abs(e.value - r.value) <= combined_ci(e.ci_half, r.ci);
}

// [lower - ci, upper + ci] meets [ref - ci, ref + ci]
bool overlaps(const BoundEstimate& lo, const BoundEstimate& up, const Ref& r) {
  return lo.value - lo.ci_half <= r.value + r.ci && up.value + up.ci_half >= r.value - r.ci;
}

std::string raw_table(const DerivativeTable& t) {
  std::ostringstream os;
  write_table(os, t, NumberFormat::Raw);
  return os.str();
}

RunConfig reference_config() {
  RunConfig c;
  c.params = reference_params();
  c.n_fit = 100000;
  c.n_eval = 500000;
  c.strikes = kStrikes;
  c.seed_fit = 1;
  c.seed_eval = 2;
  return c;
}

void degenerate_model() {
  RunConfig c = reference_config();
  c.params = test::deterministic_params();
  c.n_fit = 20000;
  c.n_eval = 40000;
  c.oracle.n_outer = 2000;
  c.oracle.n_inner = 100;
  const auto t = run_price(c).table;
  double worst_value = 0, worst_se = 0;
  for (const BoundEstimate* e : {&t.plain.future, &t.lower.future, &t.upper.future,
                                 &t.oracle->future, &t.jensen.vol_swap, &t.jensen.sqrt_var_swap}) {
    worst_value = std::max(worst_value, std::abs(e->value - 30.0));
    worst_se = std::max(worst_se, e->std_error);
  }
  report(1, "degenerate model", worst_value <= kExactTol && worst_se <= kExactTol,
         fmt("max |value - 30| = %.2e, max stderr = %.2e (tol %.0e)", worst_value, worst_se,
             kExactTol));
}

struct MainRuns {
  PriceRun low;
  PriceRun high;
};

MainRuns main_runs() {
  RunConfig c = reference_config();
  c.oracle.n_outer = 50000;
  c.oracle.n_inner = 1000;
  MainRuns out{run_price(c), {}};
  c.basis = higher_degree_basis();
  c.oracle.n_outer = 0;  // same seeds: the oracle column would be identical
  out.high = run_price(c);
  out.high.table.oracle = out.low.table.oracle;
  return out;
}

void lower_degree_future(const DerivativeTable& t) {
  const auto& lo = t.lower.future;
  const auto& up = t.upper.future;
  const auto& o = t.oracle->future;
  const bool in_lo = std::abs(lo.value - kLowerFuture.value) <= kFutureTol;
  const bool in_up = std::abs(up.value - kUpperFuture.value) <= kFutureTol;
  const bool bracket = lo.value <= o.value && o.value <= up.value;
  const bool gap = up.value - lo.value <= kMaxGapLow;
  const bool oracle_ok = within(o, kNestedFuture);
  report(2, "lower-degree future", in_lo && in_up && bracket && gap && oracle_ok,
         fmt("lower %.4f (ref %.4f +-%.2f) upper %.4f (ref %.4f +-%.2f) gap %.4f (<= %.1f); "
             "oracle %.4f +- %.4f vs %.4f +- %.4f, bracketed %s",
             lo.value, kLowerFuture.value, kFutureTol, up.value, kUpperFuture.value, kFutureTol,
             up.value - lo.value, kMaxGapLow, o.value, o.ci_half, kNestedFuture.value,
             kNestedFuture.ci, bracket ? "yes" : "no"));
}

void higher_degree_future(const DerivativeTable& t) {
  const BoundEstimate* e[4] = {&t.lower.future, &t.upper.future, &t.plain.future,
                               &t.oracle->future};
  double worst = 0;  // largest |a - b| / combined ci
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      worst = std::max(worst, std::abs(e[i]->value - e[j]->value) /
                                  combined_ci(e[i]->ci_half, e[j]->ci_half));
  const double gap = t.upper.future.value - t.lower.future.value;
  report(3, "higher-degree future", gap <= kMaxGapHigh && worst <= 2.0,
         fmt("lower %.4f upper %.4f plain %.4f oracle %.4f; gap %.4f (<= %.2f); "
             "max pairwise distance %.2f combined CIs (<= 2)",
             e[0]->value, e[1]->value, e[2]->value, e[3]->value, gap, kMaxGapHigh, worst));
}

void swap_bounds(const DerivativeTable& t) {
  const auto& v = t.jensen.vol_swap;
  const auto& s = t.jensen.sqrt_var_swap;
  const double zv = std::abs(v.value - kVolSwap) / v.std_error;
  const double zs = std::abs(s.value - kSqrtVarSwap) / s.std_error;
  report(4, "swap bounds", zv <= 3 && zs <= 3,
         fmt("vol swap %.4f (ref %.4f, %.2f se) sqrt var swap %.4f (ref %.4f, %.2f se)", v.value,
             kVolSwap, zv, s.value, kSqrtVarSwap, zs));
}

void calls_and_puts(const DerivativeTable& t) {
  bool ok = true;
  std::string bad;
  for (std::size_t i = 0; i < kStrikes.size(); ++i) {
    if (!overlaps(t.lower.call[i], t.upper.call[i], kNestedCall[i])) {
      ok = false;
      bad += fmt(" call K=%g", kStrikes[i]);
    }
    if (!overlaps(t.lower.put[i], t.upper.put[i], kNestedPut[i])) {
      ok = false;
      bad += fmt(" put K=%g", kStrikes[i]);
    }
    if (i > 0) {
      const bool calls_down = t.lower.call[i].value < t.lower.call[i - 1].value &&
                              t.upper.call[i].value < t.upper.call[i - 1].value;
      const bool puts_up = t.lower.put[i].value > t.lower.put[i - 1].value &&
                           t.upper.put[i].value > t.upper.put[i - 1].value;
      if (!calls_down || !puts_up) {
        ok = false;
        bad += fmt(" monotonicity at K=%g", kStrikes[i]);
      }
    }
  }
  report(5, "calls and puts", ok,
         fmt("K=25: call [%.4f, %.4f] vs %.4f, put [%.4f, %.4f] vs %.4f%s", t.lower.call[2].value,
             t.upper.call[2].value, kNestedCall[2].value, t.lower.put[2].value,
             t.upper.put[2].value, kNestedPut[2].value, ok ? "" : ("; failed:" + bad).c_str()));
}

void sweeps() {
  RunConfig c = reference_config();
  std::vector<double> rhos;
  for (int i = -4; i <= 4; ++i) rhos.push_back(0.2 * i);
  const auto rho = run_sweep(c, "rho", rhos);
  bool monotone = true;
  for (std::size_t i = 1; i < rho.size(); ++i)
    monotone = monotone && rho[i].plain.value < rho[i - 1].plain.value;
  const bool ends = within(rho.front().plain, kRhoLow) && within(rho.back().plain, kRhoHigh);
  const auto eta = run_sweep(c, "eta", std::vector<double>{0.1});
  const double eta_gap = eta[0].upper.value - eta[0].lower.value;
  const auto alpha = run_sweep(c, "alpha", std::vector<double>{1.0});
  const bool alpha_ok = within(alpha[0].plain, kAlphaOne);
  report(6, "parameter sweeps", monotone && ends && eta_gap <= kMaxGapEta && alpha_ok,
         fmt("rho: monotone %s, %.4f at -0.8 (ref %.4f), %.4f at 0.8 (ref %.4f); eta=0.1 gap "
             "%.4f (<= %.2f); alpha=1 %.4f (ref %.4f)",
             monotone ? "yes" : "no", rho.front().plain.value, kRhoLow.value,
             rho.back().plain.value, kRhoHigh.value, eta_gap, kMaxGapEta, alpha[0].plain.value,
             kAlphaOne.value));
}

void exact_properties(const DerivativeTable& table) {
  std::vector<std::string> bad;
  auto need = [&](bool ok, const char* what) {
    if (!ok) bad.emplace_back(what);
  };

  // Legendre inequalities and equality cases, 25 x 20 x 20 grid
  bool leg = true;
  for (int i = 0; i < 25; ++i) {
    const double x = i == 0 ? 0.0 : std::pow(10.0, -2.0 + 0.3 * i);
    const double sx = std::sqrt(x);
    for (int j = 0; j < 20; ++j) {
      const double y = std::pow(10.0, -5.0 + 0.3 * j);
      leg = leg && legendre_sqrt(x, y) - sx >= -kPropertyTol * std::max(1.0, sx);
      for (int m = 0; m < 20; ++m) {
        const double k = 2.5 * (m + 1);
        leg = leg && legendre_cap(x, y, k) - std::min(sx, k) >= -kPropertyTol * std::max(1.0, sx);
        if (x > 0) {
          const double ystar = x <= k * k ? 1 / (2 * sx) : 0.0;
          leg = leg && std::abs(legendre_cap(x, ystar, k) - std::min(sx, k)) <=
                           kPropertyTol * std::max(1.0, sx);
        }
      }
    }
    if (x > 0) leg = leg && std::abs(legendre_sqrt(x, 1 / (2 * sx)) - sx) <= kPropertyTol * std::max(1.0, sx);
  }
  need(leg, "legendre");

  const LsvParams p = reference_params();
  const auto batch = simulate_paths(p, 40000, 5);
  const auto& r = batch.realised_var;
  const std::vector<double> zero(r.size(), 0.0);
  const auto j = jensen_bounds(r);
  const auto lo = lower_future(r, zero);
  need(lo.value == j.vol_swap.value && lo.std_error == j.vol_swap.std_error, "lower reduction");
  const double rbar = mean(r);
  const auto up = upper_future(r, std::vector<double>(r.size(), rbar));
  need(std::abs(up.value - std::sqrt(rbar)) <= kPropertyTol * std::sqrt(rbar), "upper reduction");

  bool ident = true;
  for (std::size_t i = 0; i < table.strikes.size(); ++i) {
    const double k = table.strikes[i];
    ident = ident && table.upper.call[i].value == table.upper.future.value - table.lower.cap[i].value;
    ident = ident && table.lower.call[i].value == table.lower.future.value - table.upper.cap[i].value;
    ident = ident && table.upper.put[i].value == k - table.lower.cap[i].value;
    ident = ident && table.lower.put[i].value == k - table.upper.cap[i].value;
    ident = ident && table.upper.swap[i].value == table.upper.future.value - k;
    ident = ident && table.lower.swap[i].value == table.lower.future.value - k;
  }
  need(ident, "assembly identities");

  bool anti = true;
  for (std::size_t i = 0; i + 1 < batch.n_paths; i += 2)
    for (std::size_t l = 0; l < batch.n_window; ++l) {
      anti = anti && batch.dw_s[i * batch.n_window + l] + batch.dw_s[(i + 1) * batch.n_window + l] == 0.0;
      anti = anti && batch.dw_v[i * batch.n_window + l] + batch.dw_v[(i + 1) * batch.n_window + l] == 0.0;
    }
  need(anti, "antithetic sums");

  const auto fit = fit_lsmc(batch, lower_degree_basis());
  const double ortho = residual_orthogonality(fit, batch);
  need(ortho <= kOrthoTol, "residual orthogonality");

  const double ystar = 1 / (2 * std::sqrt(1000.0));
  std::vector<double> ys;
  for (int i = -150; i <= 150; ++i) ys.push_back(ystar + 1e-4 * i);
  const auto dual = duality_gap_check(sqrt_function(), std::vector<double>{400, 1600}, ys);
  need(dual.all_nonnegative && dual.min_gap < kDualityTol, "duality gap");

  std::string detail = fmt("10^4-point Legendre grid, reductions, identities, antithetic sums; "
                           "orthogonality %.1e (<= %.0e); two-point duality gap %.1e (< %.0e)",
                           ortho, kOrthoTol, dual.min_gap, kDualityTol);
  for (const auto& b : bad) detail += "; failed " + b;
  report(7, "exact properties", bad.empty(), detail);
}

void determinism() {
  RunConfig c = reference_config();
  c.n_fit = 20000;
  c.n_eval = 40000;
  c.oracle.n_outer = 500;
  c.oracle.n_inner = 50;
  const auto first = run_price(c, Exec{1, "auto"});
  // Replay from the written manifest at other thread counts.
  std::istringstream manifest(to_manifest(first.config));
  const RunConfig replay = parse_config(manifest, "manifest");
  const std::string want = raw_table(first.table);
  bool same = true;
  for (unsigned threads : {2u, 3u, 8u})
    same = same && raw_table(run_price(replay, Exec{threads, "auto"}).table) == want;
  report(8, "determinism", same,
         fmt("manifest replay at 1, 2, 3, 8 threads, kernel %s: tables %s",
             first.config.kernel.c_str(), same ? "byte-identical" : "differ"));
}

void guarded(int id, const char* name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, "degenerate model", degenerate_model);
  MainRuns runs;
  bool have_runs = false;
  try {
    runs = main_runs();
    have_runs = true;
  } catch (const std::exception& e) {
    for (int id : {2, 3, 4, 5}) report(id, "main runs", false, std::string("exception: ") + e.what());
  }
  if (have_runs) {
    guarded(2, "lower-degree future", [&] { lower_degree_future(runs.low.table); });
    guarded(3, "higher-degree future", [&] { higher_degree_future(runs.high.table); });
    guarded(4, "swap bounds", [&] { swap_bounds(runs.low.table); });
    guarded(5, "calls and puts", [&] { calls_and_puts(runs.low.table); });
  }
  guarded(6, "parameter sweeps", sweeps);
  guarded(7, "exact properties", [&] {
    if (!have_runs) throw std::runtime_error("main runs unavailable");
    exact_properties(runs.low.table);
  });
  guarded(8, "determinism", determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
