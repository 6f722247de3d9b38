#include "vixb/simulate.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <utility>

#include "draws.hpp"
#include "vixb/error.hpp"
#include "vixb/kernels.hpp"
#include "vixb/rng.hpp"

namespace vixb {
namespace {

constexpr std::size_t kBlock = 512;  // even, so antithetic pairs never straddle blocks

std::pair<std::uint32_t, std::uint32_t> split_stream(std::uint64_t stream) {
  return {static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

void check_sizes(std::size_t n_paths, bool antithetic) {
  if (n_paths == 0) throw InvalidInput("simulate: zero paths requested");
  if (antithetic && n_paths % 2 != 0)
    throw InvalidInput("simulate: antithetic sampling needs an even number of paths");
}

// Simulates paths [begin, end) on [0, t0) and returns their t0 states in s, v.
void advance_to_t0(const kernels::KernelSet& k, const kernels::StepCoeffs& c,
                   const LsvParams& p, const TimeGrid& g, std::uint64_t seed, bool antithetic,
                   std::size_t begin, std::size_t end, std::vector<double>& s,
                   std::vector<double>& v, detail::DrawBuffers& buf, std::vector<double>& z1,
                   std::vector<double>& z2) {
  const std::size_t m = end - begin;
  s.assign(m, p.s0);
  v.assign(m, p.v0);
  const std::uint64_t first_stream = antithetic ? begin / 2 : begin;
  auto words = [&](std::size_t j) { return split_stream(first_stream + j); };
  for (std::size_t step = 0; step < g.idx_t0; ++step) {
    detail::draw_normals(k, seed, StreamDomain::PreWindow, static_cast<std::uint32_t>(step), m,
                         antithetic, words, buf, z1.data(), z2.data());
    k.euler_step(c, m, s.data(), v.data(), z1.data(), z2.data(), nullptr, nullptr, nullptr);
  }
}

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw InvalidInput("path batch file truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

void put_string(std::ostream& os, const std::string& s) {
  put_le<std::uint64_t>(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& is) {
  const auto n = get_le<std::uint64_t>(is);
  if (n > (1u << 20)) throw InvalidInput("path batch file: implausible string length");
  std::string s(n, '\0');
  if (n && !is.read(s.data(), static_cast<std::streamsize>(n)))
    throw InvalidInput("path batch file truncated");
  return s;
}

void put_array(std::ostream& os, const std::vector<double>& a) {
  for (double x : a) put_le(os, x);
}

std::vector<double> get_array(std::istream& is, std::size_t n) {
  std::vector<double> a(n);
  for (auto& x : a) x = get_le<double>(is);
  return a;
}

}  // namespace

PathWindow PathBatch::path(std::size_t i) const {
  const std::size_t n = n_window;
  return PathWindow{std::span(s).subspan(i * (n + 1), n + 1),
                    std::span(v).subspan(i * (n + 1), n + 1),
                    std::span(dw_s).subspan(i * n, n), std::span(dw_v).subspan(i * n, n)};
}

WindowView restrict_to_window(const PathBatch& b) {
  return WindowView{&b, b.n_window,
                    std::span(b.grid.times).subspan(b.grid.idx_t0, b.n_window + 1)};
}

PathBatch simulate_paths(const LsvParams& p, std::size_t n_paths, std::uint64_t seed,
                         bool antithetic, const Exec& exec) {
  check_sizes(n_paths, antithetic);
  const kernels::KernelSet& k = kernels::select(exec.kernel);
  const kernels::StepCoeffs c = kernels::make_step_coeffs(p);

  PathBatch b;
  b.params = p;
  b.grid = make_grid(p);
  b.n_paths = n_paths;
  b.n_window = b.grid.n_window();
  b.seed_info = SeedInfo{seed, antithetic, stream_layout_description(antithetic)};
  b.kernel = k.name;
  const std::size_t n = b.n_window;
  b.s.resize(n_paths * (n + 1));
  b.v.resize(n_paths * (n + 1));
  b.dw_s.resize(n_paths * n);
  b.dw_v.resize(n_paths * n);
  b.realised_var.resize(n_paths);
  const double scale = realised_var_scale(p) * p.dt;

  parallel_blocks(n_paths, kBlock, exec.threads, [&](std::size_t begin, std::size_t end) {
    const std::size_t m = end - begin;
    detail::DrawBuffers buf;
    buf.resize(m);
    std::vector<double> s, v, z1(m), z2(m), dws(m), dwv(m), sig2(m), acc(m, 0.0);
    advance_to_t0(k, c, p, b.grid, seed, antithetic, begin, end, s, v, buf, z1, z2);

    const std::uint64_t first_stream = antithetic ? begin / 2 : begin;
    auto words = [&](std::size_t j) { return split_stream(first_stream + j); };
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t j = 0; j < m; ++j) {
        b.s[(begin + j) * (n + 1) + l] = s[j];
        b.v[(begin + j) * (n + 1) + l] = v[j];
      }
      detail::draw_normals(k, seed, StreamDomain::Window, static_cast<std::uint32_t>(l), m,
                           antithetic, words, buf, z1.data(), z2.data());
      k.euler_step(c, m, s.data(), v.data(), z1.data(), z2.data(), dws.data(), dwv.data(),
                   sig2.data());
      for (std::size_t j = 0; j < m; ++j) {
        b.dw_s[(begin + j) * n + l] = dws[j];
        b.dw_v[(begin + j) * n + l] = dwv[j];
        acc[j] += sig2[j];
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      b.s[(begin + j) * (n + 1) + n] = s[j];
      b.v[(begin + j) * (n + 1) + n] = v[j];
      b.realised_var[begin + j] = acc[j] * scale;
    }
  });
  return b;
}

OuterStates simulate_t0_states(const LsvParams& p, std::size_t n_paths, std::uint64_t seed,
                               bool antithetic, const Exec& exec) {
  check_sizes(n_paths, antithetic);
  const kernels::KernelSet& k = kernels::select(exec.kernel);
  const kernels::StepCoeffs c = kernels::make_step_coeffs(p);
  const TimeGrid g = make_grid(p);
  OuterStates out;
  out.s.resize(n_paths);
  out.v.resize(n_paths);
  parallel_blocks(n_paths, kBlock, exec.threads, [&](std::size_t begin, std::size_t end) {
    const std::size_t m = end - begin;
    detail::DrawBuffers buf;
    buf.resize(m);
    std::vector<double> s, v, z1(m), z2(m);
    advance_to_t0(k, c, p, g, seed, antithetic, begin, end, s, v, buf, z1, z2);
    std::copy(s.begin(), s.end(), out.s.begin() + static_cast<std::ptrdiff_t>(begin));
    std::copy(v.begin(), v.end(), out.v.begin() + static_cast<std::ptrdiff_t>(begin));
  });
  return out;
}

void write_path_batch(const std::filesystem::path& file, const PathBatch& b) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw InvalidInput("cannot open " + file.string() + " for writing");
  os.write("VIXBPATH", 8);
  put_le<std::uint32_t>(os, kPathBatchVersion);
  const LsvParams& p = b.params;
  for (double x : {p.s0, p.v0, p.alpha, p.kappa, p.theta, p.eta, p.rho, p.vol_floor, p.vol_cap,
                   p.t0, p.t_end, p.dt})
    put_le(os, x);
  put_le<std::uint64_t>(os, b.n_paths);
  put_le<std::uint64_t>(os, b.n_window);
  put_le<std::uint64_t>(os, b.seed_info.seed);
  put_le<std::uint64_t>(os, b.seed_info.antithetic ? 1 : 0);
  put_string(os, b.seed_info.layout);
  put_string(os, b.kernel);
  put_array(os, b.s);
  put_array(os, b.v);
  put_array(os, b.dw_s);
  put_array(os, b.dw_v);
  put_array(os, b.realised_var);
  if (!os) throw InvalidInput("write failed for " + file.string());
}

PathBatch read_path_batch(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw InvalidInput("cannot open " + file.string());
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, "VIXBPATH", 8) != 0)
    throw InvalidInput(file.string() + " is not a path batch file");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kPathBatchVersion)
    throw InvalidInput("unsupported path batch version " + std::to_string(version));
  PathBatch b;
  LsvParams& p = b.params;
  for (double* x : {&p.s0, &p.v0, &p.alpha, &p.kappa, &p.theta, &p.eta, &p.rho, &p.vol_floor,
                    &p.vol_cap, &p.t0, &p.t_end, &p.dt})
    *x = get_le<double>(is);
  b.grid = make_grid(p);
  b.n_paths = get_le<std::uint64_t>(is);
  b.n_window = get_le<std::uint64_t>(is);
  if (b.n_window != b.grid.n_window())
    throw InvalidInput("path batch file: window length disagrees with its grid");
  b.seed_info.seed = get_le<std::uint64_t>(is);
  b.seed_info.antithetic = get_le<std::uint64_t>(is) != 0;
  b.seed_info.layout = get_string(is);
  b.kernel = get_string(is);
  const std::size_t n = b.n_window;
  b.s = get_array(is, b.n_paths * (n + 1));
  b.v = get_array(is, b.n_paths * (n + 1));
  b.dw_s = get_array(is, b.n_paths * n);
  b.dw_v = get_array(is, b.n_paths * n);
  b.realised_var = get_array(is, b.n_paths);
  return b;
}

}  // namespace vixb
