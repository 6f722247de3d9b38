#include <doctest.h>

#include <cmath>
#include <set>

#include "vixb/rng.hpp"

using namespace vixb;

TEST_CASE("philox known answers") {
  // Known-answer vectors for Philox4x32-10 from the Random123 distribution.
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms are open-interval and stream dependent") {
  std::set<double> seen;
  for (std::uint32_t step = 0; step < 20; ++step) {
    for (std::uint64_t stream = 0; stream < 50; ++stream) {
      const auto u = path_uniforms(7, StreamDomain::Window, step, stream);
      CHECK(u.u1 > 0.0);
      CHECK(u.u1 < 1.0);
      CHECK(u.u2 > 0.0);
      CHECK(u.u2 < 1.0);
      seen.insert(u.u1);
    }
  }
  CHECK(seen.size() == 1000);
  const auto a = path_uniforms(7, StreamDomain::Window, 3, 4);
  const auto b = path_uniforms(7, StreamDomain::PreWindow, 3, 4);
  const auto c = path_uniforms(8, StreamDomain::Window, 3, 4);
  CHECK(a.u1 != b.u1);
  CHECK(a.u1 != c.u1);
  const auto again = path_uniforms(7, StreamDomain::Window, 3, 4);
  CHECK(a.u1 == again.u1);
  CHECK(a.u2 == again.u2);
}

TEST_CASE("uniform moments") {
  double s1 = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n / 2; ++i) {
    const auto u = path_uniforms(1, StreamDomain::Window, 0, static_cast<std::uint64_t>(i));
    s1 += u.u1 + u.u2;
    s2 += u.u1 * u.u1 + u.u2 * u.u2;
  }
  CHECK(std::abs(s1 / n - 0.5) < 4 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(s2 / n - 1.0 / 3.0) < 4 * std::sqrt(4.0 / 45.0 / n));
}

TEST_CASE("normal_icdf against an erfc oracle") {
  // Phi(z) = erfc(-z / sqrt 2) / 2 is independent of the rational approximation.
  double worst = 0.0;
  for (double z = -37.0; z <= 8.0; z += 0.01) {
    const double u = 0.5 * std::erfc(-z / std::sqrt(2.0));
    if (u <= 0.0 || u >= 1.0) continue;
    const double back = normal_icdf(u);
    // Condition the comparison on the probability actually represented.
    const double u_back = 0.5 * std::erfc(-back / std::sqrt(2.0));
    worst = std::max(worst, std::abs(u_back - u) / std::min(u, 1.0 - u + 1e-300));
  }
  CHECK(worst < 1e-9);
  CHECK(normal_icdf(0.5) == 0.0);
  CHECK(normal_icdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_icdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-14));
  for (double u : {1e-5, 0.1, 0.3, 0.7, 0.9})
    CHECK(normal_icdf(u) == doctest::Approx(-normal_icdf(1 - u)).epsilon(1e-6));
}
