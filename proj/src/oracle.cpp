#include "vixb/oracle.hpp"

#include <algorithm>

#include "draws.hpp"
#include "vixb/error.hpp"
#include "vixb/kernels.hpp"

namespace vixb {

OuterStates reuse_outer_paths(const PathBatch& b, std::size_t n) {
  if (n == 0) n = b.n_paths;
  if (n > b.n_paths) throw InvalidInput("reuse_outer_paths: batch has fewer paths than requested");
  OuterStates out;
  out.s.resize(n);
  out.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.s[i] = b.s_t0(i);
    out.v[i] = b.v_t0(i);
  }
  return out;
}

std::vector<double> nested_conditional_variance(const LsvParams& p, const OuterStates& outer,
                                                std::size_t n_inner, std::uint64_t seed,
                                                const Exec& exec) {
  require_valid(p);
  if (outer.size() < 2 || n_inner < 2)
    throw InvalidInput("nested oracle needs at least 2 outer and 2 inner paths");
  if (n_inner % 2 != 0) throw InvalidInput("nested oracle needs an even inner path count");
  if (outer.size() > 0xFFFFFFFFull) throw InvalidInput("nested oracle: too many outer paths");
  const kernels::KernelSet& k = kernels::select(exec.kernel);
  const kernels::StepCoeffs c = kernels::make_step_coeffs(p);
  const std::size_t n_steps = make_grid(p).n_window();
  const double scale = realised_var_scale(p) * p.dt;

  std::vector<double> x(outer.size());
  parallel_blocks(outer.size(), 8, exec.threads, [&](std::size_t begin, std::size_t end) {
    detail::DrawBuffers buf;
    buf.resize(n_inner);
    std::vector<double> s(n_inner), v(n_inner), z1(n_inner), z2(n_inner), sig2(n_inner),
        acc(n_inner);
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(s.begin(), s.end(), outer.s[i]);
      std::fill(v.begin(), v.end(), outer.v[i]);
      std::fill(acc.begin(), acc.end(), 0.0);
      const auto outer_word = static_cast<std::uint32_t>(i);
      auto words = [&](std::size_t j) {
        return std::pair<std::uint32_t, std::uint32_t>{outer_word, static_cast<std::uint32_t>(j)};
      };
      for (std::size_t l = 0; l < n_steps; ++l) {
        detail::draw_normals(k, seed, StreamDomain::Inner, static_cast<std::uint32_t>(l), n_inner,
                             true, words, buf, z1.data(), z2.data());
        k.euler_step(c, n_inner, s.data(), v.data(), z1.data(), z2.data(), nullptr, nullptr,
                     sig2.data());
        for (std::size_t j = 0; j < n_inner; ++j) acc[j] += sig2[j];
      }
      for (auto& a : acc) a *= scale;
      x[i] = mean(acc);
    }
  });
  return x;
}

TableColumn nested_price(const LsvParams& p, const OuterStates& outer, std::size_t n_inner,
                         std::uint64_t seed, std::span<const double> strikes, const Exec& exec) {
  const auto x = nested_conditional_variance(p, outer, n_inner, seed, exec);
  return conditional_column(x, strikes);
}

TableColumn nested_price(const LsvParams& p, std::size_t n_outer, std::size_t n_inner,
                         std::uint64_t seed, std::span<const double> strikes, const Exec& exec) {
  if (n_outer < 2) throw InvalidInput("nested oracle needs at least 2 outer paths");
  // Round up to whole antithetic pairs so the cross-section is a prefix of
  // the antithetic evaluation batch.
  OuterStates outer = simulate_t0_states(p, n_outer + n_outer % 2, seed, true, exec);
  outer.s.resize(n_outer);
  outer.v.resize(n_outer);
  return nested_price(p, outer, n_inner, seed, strikes, exec);
}

}  // namespace vixb
