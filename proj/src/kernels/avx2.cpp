// AVX2 + FMA kernels. Compiled with -mavx2 -mfma; only reached through
// kernels::avx2(), which checks the CPU first.
#include <immintrin.h>

#include <algorithm>
#include <cstdint>

#include "vixb/kernels.hpp"

namespace vixb::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d splat(double x) { return _mm256_set1_pd(x); }

// exp(x) for |x| <= 700: x = n ln2 + r with |r| <= ln2/2, then a degree-13
// Taylor polynomial in r (truncation < 1e-17 relative) scaled by 2^n.
inline __m256d exp_pd(__m256d x) {
  x = _mm256_min_pd(_mm256_max_pd(x, splat(-700.0)), splat(700.0));
  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, splat(1.4426950408889634074)),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, splat(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(n, splat(1.90821492927058770002e-10), r);

  __m256d p = splat(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, splat(0.5));
  p = _mm256_fmadd_pd(p, r, splat(1.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0));

  // 2^n: place n + 1023 in the exponent field via the 2^52 integer trick.
  const __m256d biased = _mm256_add_pd(n, splat(1023.0 + 4503599627370496.0));
  const __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// log(x) for positive normal x: x = 2^e m with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh(f), f = (m-1)/(m+1), |f| <= 0.1716, series to f^23.
inline __m256d log_pd(__m256d x) {
  const __m256i xi = _mm256_castpd_si256(x);
  const __m256i exp_field = _mm256_srli_epi64(xi, 52);
  const __m256i mant_bits = _mm256_or_si256(
      _mm256_and_si256(xi, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);  // [1, 2)
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(exp_field, _mm256_set1_epi64x(0x4330000000000000LL))),
      splat(4503599627370496.0 + 1023.0));

  const __m256d big = _mm256_cmp_pd(m, splat(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, splat(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, splat(1.0)));

  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, splat(1.0)), _mm256_add_pd(m, splat(1.0)));
  const __m256d f2 = _mm256_mul_pd(f, f);
  __m256d p = splat(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, f2, splat(1.0 / 3.0));
  // 2f + 2f^3 p, then add e ln2 in two pieces.
  const __m256d twof = _mm256_add_pd(f, f);
  __m256d lm = _mm256_fmadd_pd(_mm256_mul_pd(twof, f2), p, splat(0.0));
  lm = _mm256_fmadd_pd(e, splat(1.90821492927058770002e-10), lm);
  lm = _mm256_add_pd(lm, twof);
  return _mm256_fmadd_pd(e, splat(6.93147180369123816490e-01), lm);
}

inline __m256d horner8(__m256d r, const double (&c)[8]) {
  __m256d p = splat(c[0]);
  for (int k = 1; k < 8; ++k) p = _mm256_fmadd_pd(p, r, splat(c[k]));
  return p;
}

constexpr double kCentralNum[8] = {
    2.5090809287301226727e+3, 3.3430575583588128105e+4, 6.7265770927008700853e+4,
    4.5921953931549871457e+4, 1.3731693765509461125e+4, 1.9715909503065514427e+3,
    1.3314166789178437745e+2, 3.3871328727963666080e+0};
constexpr double kCentralDen[8] = {
    5.2264952788528545610e+3, 2.8729085735721942674e+4, 3.9307895800092710610e+4,
    2.1213794301586595867e+4, 5.3941960214247511077e+3, 6.8718700749205790830e+2,
    4.2313330701600911252e+1, 1.0};
constexpr double kNearNum[8] = {
    7.74545014278341407640e-4, 2.27238449892691845833e-2, 2.41780725177450611770e-1,
    1.27045825245236838258e+0, 3.64784832476320460504e+0, 5.76949722146069140550e+0,
    4.63033784615654529590e+0, 1.42343711074968357734e+0};
constexpr double kNearDen[8] = {
    1.05075007164441684324e-9, 5.47593808499534494600e-4, 1.51986665636164571966e-2,
    1.48103976427480074590e-1, 6.89767334985100004550e-1, 1.67638483018380384940e+0,
    2.05319162663775882187e+0, 1.0};
constexpr double kFarNum[8] = {
    2.01033439929228813265e-7, 2.71155556874348757815e-5, 1.24266094738807843860e-3,
    2.65321895265761230930e-2, 2.96560571828504891230e-1, 1.78482653991729133580e+0,
    5.46378491116411436990e+0, 6.65790464350110377720e+0};
constexpr double kFarDen[8] = {
    2.04426310338993978564e-15, 1.42151175831644588870e-7, 1.84631831751005468180e-5,
    7.86869131145613259100e-4, 1.48753612908506148525e-2, 1.36929880922735805310e-1,
    5.99832206555887937690e-1, 1.0};

inline __m256d icdf_pd(__m256d u) {
  const __m256d half = splat(0.5);
  const __m256d q = _mm256_sub_pd(u, half);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  const __m256d central = _mm256_cmp_pd(_mm256_and_pd(q, abs_mask), splat(0.425), _CMP_LE_OQ);

  const __m256d rc = _mm256_fnmadd_pd(q, q, splat(0.180625));
  const __m256d zc =
      _mm256_div_pd(_mm256_mul_pd(q, horner8(rc, kCentralNum)), horner8(rc, kCentralDen));
  if (_mm256_movemask_pd(central) == 0xF) return zc;

  const __m256d tail = _mm256_min_pd(u, _mm256_sub_pd(splat(1.0), u));
  const __m256d r = _mm256_sqrt_pd(_mm256_sub_pd(_mm256_setzero_pd(), log_pd(tail)));
  const __m256d near = _mm256_cmp_pd(r, splat(5.0), _CMP_LE_OQ);
  const __m256d rn = _mm256_sub_pd(r, splat(1.6));
  const __m256d rf = _mm256_sub_pd(r, splat(5.0));
  const __m256d zn = _mm256_div_pd(horner8(rn, kNearNum), horner8(rn, kNearDen));
  const __m256d zf = _mm256_div_pd(horner8(rf, kFarNum), horner8(rf, kFarDen));
  __m256d zt = _mm256_blendv_pd(zf, zn, near);
  const __m256d neg = _mm256_cmp_pd(q, _mm256_setzero_pd(), _CMP_LT_OQ);
  zt = _mm256_blendv_pd(zt, _mm256_sub_pd(_mm256_setzero_pd(), zt), neg);
  return _mm256_blendv_pd(zt, zc, central);
}

struct VecCoeffs {
  __m256d am1, kappa, theta, eta, rho, rho_perp, dt, half_dt, sqrt_dt, lo, hi;
  explicit VecCoeffs(const StepCoeffs& c)
      : am1(splat(c.alpha_minus_one)),
        kappa(splat(c.kappa)),
        theta(splat(c.theta)),
        eta(splat(c.eta)),
        rho(splat(c.rho)),
        rho_perp(splat(c.rho_perp)),
        dt(splat(c.dt)),
        half_dt(splat(0.5 * c.dt)),
        sqrt_dt(splat(c.sqrt_dt)),
        lo(splat(c.vol_floor)),
        hi(splat(c.vol_cap)) {}
};

inline __m256d sigma_pd(const VecCoeffs& k, __m256d s, __m256d v_plus, double s0) {
  // s / s0 is formed by division to match the scalar reference's rounding.
  const __m256d ratio = _mm256_div_pd(s, splat(s0));
  const __m256d lev = exp_pd(_mm256_mul_pd(k.am1, log_pd(ratio)));
  const __m256d raw = _mm256_mul_pd(_mm256_sqrt_pd(v_plus), lev);
  return _mm256_min_pd(_mm256_max_pd(raw, k.lo), k.hi);
}

// Runs `body(offset)` over full 4-lane groups; the remainder is handled by
// the same vector body on a padded copy so every lane takes the same path.
template <std::size_t NIn, std::size_t NOut, class Body>
void for_lanes(std::size_t n, const double* const (&in)[NIn], double* const (&out)[NOut],
               const double (&pad)[NIn], Body&& body) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const double* ip[NIn];
    double* op[NOut];
    for (std::size_t a = 0; a < NIn; ++a) ip[a] = in[a] + i;
    for (std::size_t a = 0; a < NOut; ++a) op[a] = out[a] ? out[a] + i : nullptr;
    body(ip, op);
  }
  if (i == n) return;
  alignas(32) double tin[NIn][kLanes];
  alignas(32) double tout[NOut][kLanes];
  const std::size_t rem = n - i;
  for (std::size_t a = 0; a < NIn; ++a) {
    std::fill(tin[a], tin[a] + kLanes, pad[a]);
    std::copy(in[a] + i, in[a] + n, tin[a]);
  }
  const double* ip[NIn];
  double* op[NOut];
  for (std::size_t a = 0; a < NIn; ++a) ip[a] = tin[a];
  for (std::size_t a = 0; a < NOut; ++a) op[a] = out[a] ? tout[a] : nullptr;
  body(ip, op);
  for (std::size_t a = 0; a < NOut; ++a)
    if (out[a]) std::copy(tout[a], tout[a] + rem, out[a] + i);
}

void icdf_avx2(std::size_t n, const double* u, double* z) {
  const double* const in[1] = {u};
  double* const out[1] = {z};
  const double pad[1] = {0.5};
  for_lanes(n, in, out, pad, [](const double* const* ip, double* const* op) {
    _mm256_storeu_pd(op[0], icdf_pd(_mm256_loadu_pd(ip[0])));
  });
}

void vol_avx2(const StepCoeffs& c, std::size_t n, const double* s, const double* v,
              double* out_sigma) {
  const VecCoeffs k(c);
  const double* const in[2] = {s, v};
  double* const out[1] = {out_sigma};
  const double pad[2] = {c.s0, c.theta};
  for_lanes(n, in, out, pad, [&](const double* const* ip, double* const* op) {
    const __m256d vp = _mm256_max_pd(_mm256_loadu_pd(ip[1]), _mm256_setzero_pd());
    _mm256_storeu_pd(op[0], sigma_pd(k, _mm256_loadu_pd(ip[0]), vp, c.s0));
  });
}

void step_avx2(const StepCoeffs& c, std::size_t n, double* s, double* v, const double* z1,
               const double* z2, double* dw_s, double* dw_v, double* sigma2) {
  const VecCoeffs k(c);
  const double* const in[4] = {s, v, z1, z2};
  double* const out[5] = {s, v, dw_s, dw_v, sigma2};
  const double pad[4] = {c.s0, c.theta, 0.0, 0.0};
  for_lanes(n, in, out, pad, [&](const double* const* ip, double* const* op) {
    const __m256d sv = _mm256_loadu_pd(ip[0]);
    const __m256d vv = _mm256_loadu_pd(ip[1]);
    const __m256d a = _mm256_loadu_pd(ip[2]);
    const __m256d b = _mm256_loadu_pd(ip[3]);
    const __m256d vp = _mm256_max_pd(vv, _mm256_setzero_pd());
    const __m256d sig = sigma_pd(k, sv, vp, c.s0);
    const __m256d sig2 = _mm256_mul_pd(sig, sig);
    const __m256d dws = _mm256_mul_pd(k.sqrt_dt, a);
    const __m256d dwv =
        _mm256_mul_pd(k.sqrt_dt, _mm256_fmadd_pd(k.rho, a, _mm256_mul_pd(k.rho_perp, b)));
    const __m256d arg = _mm256_fmsub_pd(sig, dws, _mm256_mul_pd(sig2, k.half_dt));
    const __m256d s_new = _mm256_mul_pd(sv, exp_pd(arg));
    const __m256d drift = _mm256_mul_pd(_mm256_mul_pd(k.kappa, _mm256_sub_pd(k.theta, vp)), k.dt);
    const __m256d diff = _mm256_mul_pd(_mm256_mul_pd(k.eta, _mm256_sqrt_pd(vp)), dwv);
    const __m256d v_new = _mm256_add_pd(_mm256_add_pd(vv, drift), diff);
    _mm256_storeu_pd(op[0], s_new);
    _mm256_storeu_pd(op[1], v_new);
    if (op[2]) _mm256_storeu_pd(op[2], dws);
    if (op[3]) _mm256_storeu_pd(op[3], dwv);
    if (op[4]) _mm256_storeu_pd(op[4], sig2);
  });
}

}  // namespace

const KernelSet& avx2_impl() {
  static const KernelSet k{"avx2", &icdf_avx2, &vol_avx2, &step_avx2};
  return k;
}

}  // namespace vixb::kernels
