#pragma once

#include <cstdint>
#include <vector>

#include "vixb/kernels.hpp"
#include "vixb/rng.hpp"

namespace vixb::detail {

/// Scratch for Gaussian draws of one block of lanes.
struct DrawBuffers {
  std::vector<double> u1, u2, g1, g2;
  void resize(std::size_t n) {
    u1.resize(n);
    u2.resize(n);
    g1.resize(n);
    g2.resize(n);
  }
};

/// Fills z1[0..m), z2[0..m) for m lanes. Lane j draws from stream j/2 (with
/// odd lanes negated) when antithetic, else stream j. words(stream) returns
/// the last two counter words for that stream. m must be even if antithetic.
template <class Words>
void draw_normals(const kernels::KernelSet& k, std::uint64_t seed, StreamDomain domain,
                  std::uint32_t step, std::size_t m, bool antithetic, Words&& words,
                  DrawBuffers& buf, double* z1, double* z2) {
  const std::size_t n_streams = antithetic ? m / 2 : m;
  for (std::size_t j = 0; j < n_streams; ++j) {
    const auto [w2, w3] = words(j);
    const UniformPair u = uniform_pair(seed, domain, step, w2, w3);
    buf.u1[j] = u.u1;
    buf.u2[j] = u.u2;
  }
  k.normal_icdf(n_streams, buf.u1.data(), buf.g1.data());
  k.normal_icdf(n_streams, buf.u2.data(), buf.g2.data());
  if (!antithetic) {
    for (std::size_t j = 0; j < m; ++j) {
      z1[j] = buf.g1[j];
      z2[j] = buf.g2[j];
    }
    return;
  }
  for (std::size_t j = 0; j < n_streams; ++j) {
    z1[2 * j] = buf.g1[j];
    z2[2 * j] = buf.g2[j];
    z1[2 * j + 1] = -buf.g1[j];
    z2[2 * j + 1] = -buf.g2[j];
  }
}

}  // namespace vixb::detail
