#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace vixb {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: the output block is a pure function of (counter, key).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Substream domains. Each is an independent family of counters under one key.
enum class StreamDomain : std::uint32_t {
  PreWindow = 0,  // steps on [0, t0)
  Window = 1,     // steps on [t0, t_end)
  Inner = 2,      // nested sub-simulation on [t0, t_end)
};

/// Two uniforms in (0, 1) drawn for one (stream, step) pair.
///
/// Counter layout: (step, domain, stream_lo, stream_hi) for path streams;
/// the nested oracle uses (step, domain, outer index, inner stream).
/// Each 64-bit half of the block gives one uniform from its top 53 bits,
/// mapped to (k + 0.5) * 2^-53 so that 0 and 1 are never produced.
struct UniformPair {
  double u1;
  double u2;
};

UniformPair uniform_pair(std::uint64_t seed, StreamDomain domain, std::uint32_t step,
                         std::uint32_t word2, std::uint32_t word3);

inline UniformPair path_uniforms(std::uint64_t seed, StreamDomain domain, std::uint32_t step,
                                 std::uint64_t stream) {
  return uniform_pair(seed, domain, step, static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32));
}

/// Human-readable description of the substream layout, recorded in PathBatch.
std::string stream_layout_description(bool antithetic);

/// Inverse of the standard normal CDF (Wichura, AS 241 PPND16).
/// Relative accuracy about 1e-16 over (0, 1).
double normal_icdf(double u);

}  // namespace vixb
