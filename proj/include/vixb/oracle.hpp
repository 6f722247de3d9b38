#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vixb/bounds.hpp"
#include "vixb/model.hpp"
#include "vixb/parallel.hpp"
#include "vixb/simulate.hpp"

namespace vixb {

/// t0 cross-section of a batch (first n paths, all when n == 0), so the
/// oracle and the LSMC evaluation can share outer randomness.
OuterStates reuse_outer_paths(const PathBatch& b, std::size_t n = 0);

/// X-tilde_i: mean realised variance over n_inner antithetic sub-paths on
/// [t0, T] started from outer state i. Sub-path j of outer path i draws from
/// counter (step, inner domain, i, j/2) under `seed`, independent of the
/// batch streams.
std::vector<double> nested_conditional_variance(const LsvParams& p, const OuterStates& outer,
                                                std::size_t n_inner, std::uint64_t seed,
                                                const Exec& exec = {});

/// Nested Monte Carlo prices from the given outer states. The finite inner
/// sample biases sqrt(mean) downwards by O(1/n_inner); this is not corrected.
TableColumn nested_price(const LsvParams& p, const OuterStates& outer, std::size_t n_inner,
                         std::uint64_t seed, std::span<const double> strikes,
                         const Exec& exec = {});

/// Same, simulating n_outer outer paths to t0 under `seed` first. With the
/// evaluation seed these are exactly the first n_outer evaluation paths.
TableColumn nested_price(const LsvParams& p, std::size_t n_outer, std::size_t n_inner,
                         std::uint64_t seed, std::span<const double> strikes,
                         const Exec& exec = {});

}  // namespace vixb
