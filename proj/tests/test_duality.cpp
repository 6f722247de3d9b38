#include <doctest.h>

#include <cmath>

#include "vixb/duality.hpp"
#include "vixb/error.hpp"

using namespace vixb;

namespace {
std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (double y = lo; y <= hi + 1e-15; y += step) out.push_back(y);
  return out;
}
}  // namespace

TEST_CASE("constant H: sqrt") {
  const std::vector<double> h(10, 900.0);
  const std::vector<double> ys{1.0 / 120, 1.0 / 90, 1.0 / 60, 1.0 / 45, 1.0 / 30};
  const auto rep = duality_gap_check(sqrt_function(), h, ys);
  CHECK(rep.reference == doctest::Approx(30).epsilon(1e-15));
  CHECK(rep.all_nonnegative);
  CHECK(rep.argmin_y == ys[2]);
  CHECK(std::abs(rep.min_gap) < 1e-12);
}

TEST_CASE("constant H: capped sqrt") {
  const std::vector<double> h(10, 900.0);
  const std::vector<double> ys{0.0, 1.0 / 200, 1.0 / 60, 1.0 / 30};
  const auto rep = duality_gap_check(capped_sqrt_function(25), h, ys);
  CHECK(rep.reference == 25);
  CHECK(rep.all_nonnegative);
  CHECK(rep.argmin_y == 0.0);
  CHECK(rep.min_gap == 0.0);
}

TEST_CASE("two-point H with trivial sigma-field") {
  // E f(E(H | F)) = sqrt(1000); y* = 1/(2 sqrt 1000) ~ 0.0158114.
  const std::vector<double> h{400, 1600};
  const double ystar = 1 / (2 * std::sqrt(1000.0));
  std::vector<double> ys;
  for (int i = -150; i <= 200; ++i) ys.push_back(ystar + 1e-4 * i);
  const auto rep = duality_gap_check(sqrt_function(), h, ys);
  CHECK(rep.reference == doctest::Approx(std::sqrt(1000.0)).epsilon(1e-15));
  CHECK(rep.all_nonnegative);
  CHECK(rep.min_gap < 1e-6);
  CHECK(rep.min_gap >= -1e-12);
  CHECK(std::abs(rep.argmin_y - ystar) < 1e-4);
  // far from y* the gap is strictly positive
  for (std::size_t i = 0; i < ys.size(); ++i)
    if (std::abs(ys[i] - ystar) > 5e-3) CHECK(rep.gaps[i] > 1e-3);

  const auto coarse = duality_gap_check(sqrt_function(), h, grid(0.001, 0.05, 1e-3));
  CHECK(coarse.all_nonnegative);
}

TEST_CASE("grid conjugate for a user-supplied concave function") {
  ConcaveFunction f{[](double x) { return std::log1p(x); }, {}, 0.0, 50.0};
  const std::vector<double> h{1.0, 9.0};
  const auto rep = duality_gap_check(f, h, grid(0.05, 1.0, 0.01));
  CHECK(rep.reference == doctest::Approx(std::log1p(5.0)).epsilon(1e-15));
  CHECK(rep.all_nonnegative);
  CHECK(rep.min_gap < 1e-3);
}

TEST_CASE("non-concave functions are rejected") {
  ConcaveFunction convex{[](double x) { return x * x; }, {}, 0.0, 10.0};
  const std::vector<double> h{1.0, 2.0};
  CHECK_THROWS_AS(duality_gap_check(convex, h, std::vector<double>{0.5}), InvalidInput);
  CHECK_THROWS_AS(duality_gap_check(sqrt_function(), std::vector<double>{}, std::vector<double>{1}),
                  InvalidInput);
  CHECK_THROWS_AS(capped_sqrt_function(0), InvalidInput);
}
