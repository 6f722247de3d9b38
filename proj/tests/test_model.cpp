#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "vixb/error.hpp"
#include "vixb/model.hpp"

using namespace vixb;

namespace {
bool has_message(const std::vector<std::string>& errs, const std::string& what) {
  return std::any_of(errs.begin(), errs.end(),
                     [&](const std::string& e) { return e.find(what) != std::string::npos; });
}
}  // namespace

TEST_CASE("reference parameters") {
  const LsvParams p = reference_params();
  CHECK(p.s0 == 100.0);
  CHECK(p.alpha == 0.8);
  CHECK(p.v0 == 0.09);
  CHECK(p.kappa == 0.6);
  CHECK(p.theta == 0.09);
  CHECK(p.eta == 0.4);
  CHECK(p.rho == -0.5);
  CHECK(p.t0 == 1.0);
  CHECK(p.t_end == doctest::Approx(1.0 + 1.0 / 12.0).epsilon(1e-15));
  CHECK(p.dt == doctest::Approx(1.0 / 120.0).epsilon(1e-15));
  CHECK(validate(p).empty());
}

TEST_CASE("effective_vol examples") {
  const LsvParams p = reference_params();
  CHECK(effective_vol(p, 100.0, 0.09) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(effective_vol(p, p.s0, 400.0) == 10.0);
  // 0.3 * 2^(-0.2) computed by hand: 2^-0.2 = 0.870550563296124
  CHECK(effective_vol(p, 200.0, 0.09) == doctest::Approx(0.3 * 0.870550563296124).epsilon(1e-14));
  CHECK(effective_vol(p, 200.0, 0.09) == doctest::Approx(0.26116).epsilon(1e-5));
  CHECK(effective_vol(p, 100.0, -1.0) == p.vol_floor);
}

TEST_CASE("effective_vol rejects bad inputs") {
  const LsvParams p = reference_params();
  CHECK_THROWS_AS(effective_vol(p, 0.0, 0.09), InvalidInput);
  CHECK_THROWS_AS(effective_vol(p, -1.0, 0.09), InvalidInput);
  CHECK_THROWS_AS(effective_vol(p, std::numeric_limits<double>::quiet_NaN(), 0.09), InvalidInput);
  CHECK_THROWS_AS(effective_vol(p, 100.0, std::numeric_limits<double>::infinity()), InvalidInput);
}

TEST_CASE("effective_vol is clamped and monotone in v") {
  LsvParams p = reference_params();
  for (double s : {1e-6, 0.5, 50.0, 100.0, 250.0, 1e6}) {
    double prev = 0.0;
    for (double v = -1.0; v <= 500.0; v += 0.37) {
      const double sig = effective_vol(p, s, v);
      CHECK(sig >= p.vol_floor);
      CHECK(sig <= p.vol_cap);
      CHECK(sig >= prev);
      prev = sig;
    }
  }
  p.alpha = 1.0;
  for (double v : {0.0, 0.01, 0.09, 1.0, 50.0})
    for (double s : {1.0, 80.0, 100.0, 400.0})
      CHECK(effective_vol(p, s, v) == effective_vol(p, 100.0, v));
}

TEST_CASE("validate reports every violation") {
  LsvParams p = reference_params();
  p.rho = 1.5;
  CHECK(has_message(validate(p), "correlation out of range"));
  CHECK_THROWS_AS(require_valid(p), InvalidInput);

  p = reference_params();
  p.dt = 1.0 / 7.0;
  // t0 = 1 is seven steps of 1/7; the window 1/12 is not a whole number of steps.
  CHECK(has_message(validate(p), "window t_end - t0 not on grid"));

  p = reference_params();
  p.t0 = 1.0 / 240.0;
  CHECK(has_message(validate(p), "t0 not on grid"));

  p = reference_params();
  p.s0 = -1;
  p.eta = -0.1;
  p.vol_floor = 20;
  CHECK(validate(p).size() >= 3);
}

TEST_CASE("time grid") {
  const LsvParams p = reference_params();
  const TimeGrid g = make_grid(p);
  CHECK(g.n_steps() == 130);
  CHECK(g.idx_t0 == 120);
  CHECK(g.n_window() == 10);
  CHECK(g.times.front() == 0.0);
  CHECK(g.times[g.idx_t0] == p.t0);
  CHECK(g.times.back() == p.t_end);

  LsvParams q = p;
  q.dt = 1.0 / 240.0;
  CHECK(make_grid(q).n_window() == 20);
  q = p;
  q.t0 = 0.0;
  q.t_end = 1.0 / 12.0;
  CHECK(make_grid(q).idx_t0 == 0);
  CHECK(make_grid(q).n_window() == make_grid(q).n_steps());
  CHECK(steps_to(1.0, 1.0 / 120.0) == 120);
  CHECK_THROWS_AS(steps_to(0.5, 1.0 / 7.0), InvalidInput);
}
