#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vixb/model.hpp"
#include "vixb/parallel.hpp"

namespace vixb {

struct SeedInfo {
  std::uint64_t seed = 0;
  bool antithetic = true;
  std::string layout;  // see stream_layout_description
};

/// One path restricted to the VIX window: states at t_(0) = t0, ..., t_(n) = T
/// and the n Brownian increments between them.
struct PathWindow {
  std::span<const double> s;     // n + 1
  std::span<const double> v;     // n + 1
  std::span<const double> dw_s;  // n
  std::span<const double> dw_v;  // n
};

/// Simulated paths. Only the window [t0, T] is stored: the regression and
/// the bounds never look at states before t0, and keeping the full
/// [0, T] trajectory of 5e5 paths would cost about 1 GB.
struct PathBatch {
  LsvParams params;
  TimeGrid grid;
  std::size_t n_paths = 0;
  std::size_t n_window = 0;
  std::vector<double> s;             // [path][0..n_window]
  std::vector<double> v;             // [path][0..n_window]
  std::vector<double> dw_s;          // [path][0..n_window-1]
  std::vector<double> dw_v;          // [path][0..n_window-1]
  std::vector<double> realised_var;  // R(t0, T) in VIX points^2 per annum
  SeedInfo seed_info;
  std::string kernel;

  PathWindow path(std::size_t i) const;
  double s_t0(std::size_t i) const { return s[i * (n_window + 1)]; }
  double v_t0(std::size_t i) const { return v[i * (n_window + 1)]; }
  double s_end(std::size_t i) const { return s[i * (n_window + 1) + n_window]; }
};

/// Window view over a batch. Thin wrapper kept separate from the storage so
/// callers that only need [t0, T] do not depend on the batch layout.
struct WindowView {
  const PathBatch* batch = nullptr;
  std::size_t n_steps = 0;
  std::span<const double> times;  // t0 .. T, n_steps + 1 entries

  std::size_t size() const { return batch ? batch->n_paths : 0; }
  PathWindow path(std::size_t i) const { return batch->path(i); }
};

WindowView restrict_to_window(const PathBatch& b);

/// Euler full-truncation paths of (S, V) on [0, T] (log-Euler for S).
/// With antithetic set, path 2j+1 reuses the negated Gaussian draws of 2j.
/// Deterministic in (params, n_paths, seed, antithetic, kernel set).
PathBatch simulate_paths(const LsvParams& p, std::size_t n_paths, std::uint64_t seed,
                         bool antithetic = true, const Exec& exec = {});

/// Cross-section (S_t0, V_t0) of the first n paths of simulate_paths with the
/// same seed/antithetic flag; bit-identical to those paths' t0 states.
struct OuterStates {
  std::vector<double> s;
  std::vector<double> v;
  std::size_t size() const { return s.size(); }
};

OuterStates simulate_t0_states(const LsvParams& p, std::size_t n_paths, std::uint64_t seed,
                               bool antithetic = true, const Exec& exec = {});

/// Realised variance scale: 100^2 / (T - t0).
inline double realised_var_scale(const LsvParams& p) { return 1e4 / (p.t_end - p.t0); }

// Binary dump format, little-endian:
//   "VIXBPATH" | u32 version | 12 x f64 params (s0 v0 alpha kappa theta eta rho
//   vol_floor vol_cap t0 t_end dt) | u64 n_paths | u64 n_window | u64 seed |
//   u64 antithetic | u64 len + layout bytes | u64 len + kernel bytes |
//   f64 arrays s, v, dw_s, dw_v, realised_var (row-major, as stored above)
inline constexpr std::uint32_t kPathBatchVersion = 1;
void write_path_batch(const std::filesystem::path& file, const PathBatch& b);
PathBatch read_path_batch(const std::filesystem::path& file);

}  // namespace vixb
