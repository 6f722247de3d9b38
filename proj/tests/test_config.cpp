#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vixb/config.hpp"
#include "vixb/error.hpp"

using namespace vixb;

namespace {
RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    const RunConfig c = parse(text);
    validate_config(c);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("empty config takes the reference values") {
  const RunConfig c = parse("# nothing\n\n");
  CHECK(c.params.s0 == 100);
  CHECK(c.params.v0 == 0.09);
  CHECK(c.params.rho == -0.5);
  CHECK(c.n_fit == 100000);
  CHECK(c.n_eval == 500000);
  CHECK(c.basis.psi_degree == 3);
  CHECK(c.basis.phi_degree == 2);
  CHECK(c.strikes == std::vector<double>{15, 20, 25, 30, 35, 40, 45});
  CHECK(c.oracle.n_outer == 0);
  CHECK(c.oracle.n_inner == 1000);
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("keys and expressions") {
  const RunConfig c = parse(
      "rho = -0.8   # strong leverage\n"
      "T = 1 + 1/12\n"
      "dt = 1/240\n"
      "N = 50000\n"
      "N_tilde = 60000\n"
      "psi_degree = 4\nphi_degree = 3\n"
      "phi_form = shared\n"
      "strikes = 20, 30,40\n"
      "seed_fit = 11\nseed_eval = 12\n"
      "oracle.n_outer = 1000\noracle.n_inner = 500\n"
      "kernel = scalar\nantithetic = true\n");
  CHECK(c.params.rho == -0.8);
  CHECK(c.params.t_end == 1.0 + 1.0 / 12.0);
  CHECK(c.params.dt == 1.0 / 240.0);
  CHECK(c.n_fit == 50000);
  CHECK(c.basis.psi_degree == 4);
  CHECK(c.basis.phi_form == PhiForm::Shared);
  CHECK(c.strikes == std::vector<double>{20, 30, 40});
  CHECK(c.seed_eval == 12);
  CHECK(c.oracle.n_outer == 1000);
  CHECK(c.kernel == "scalar");
  CHECK(parse_real_expression("(1 + 2) * -3 / 4") == -2.25);
  CHECK(parse_real_expression("1e-2") == 0.01);
}

TEST_CASE("sigma0 implies v0") {
  CHECK(parse("sigma0 = 0.2\n").params.v0 == doctest::Approx(0.04).epsilon(1e-15));
  CHECK_NOTHROW(parse("sigma0 = 0.3\nv0 = 0.09\n"));
  CHECK_THROWS_AS(parse("sigma0 = 0.2\nv0 = 0.09\n"), ConfigError);
}

TEST_CASE("diagnostics name the line and key") {
  CHECK(error_of("rho = 0.1\nbogus = 3\n").find("test.cfg:2: unknown key 'bogus'") == 0);
  CHECK(error_of("rho\n").find("test.cfg:1: expected 'key = value'") == 0);
  CHECK(error_of("N = -5\n").find("test.cfg:1:") == 0);
  CHECK(error_of("rho = 0.1\n\nrho = 0.2\n").find("duplicate key 'rho' (first on line 1)") !=
        std::string::npos);
  CHECK(error_of("kappa = 1/0\n").find("division by zero") != std::string::npos);
  CHECK(error_of("strikes = 10, x\n").find("test.cfg:1:") == 0);
  CHECK(error_of("phi_form = both\n").find("test.cfg:1:") == 0);
  CHECK(error_of("rho = 1.5\n").find("correlation out of range") != std::string::npos);
  CHECK(error_of("N = 100\n").find("too small") != std::string::npos);
  CHECK(error_of("N_tilde = 1001\n").find("even") != std::string::npos);
  CHECK(error_of("oracle.n_outer = 10\noracle.n_inner = 3\n").find("oracle.n_inner") !=
        std::string::npos);
  CHECK(error_of("kernel = gpu\n").find("kernel") != std::string::npos);
  CHECK(error_of("strikes = 10, -5\n").find("positive") != std::string::npos);
}

TEST_CASE("manifest round trip is exact") {
  RunConfig c = parse("rho = 0.3\nT = 1 + 1/12\nsigma0 = 0.25\nstrikes = 17.5, 22\nseed_fit = 9\n");
  c.kernel = "scalar";
  const std::string m = to_manifest(c);
  const RunConfig back = parse(m);
  CHECK(to_manifest(back) == m);
  CHECK(back.params.t_end == c.params.t_end);
  CHECK(back.params.v0 == c.params.v0);
  CHECK(back.strikes == c.strikes);
  CHECK(back.seed_fit == 9);
  CHECK(back.kernel == "scalar");

  c.strikes.clear();
  CHECK(parse(to_manifest(c)).strikes.empty());
}
