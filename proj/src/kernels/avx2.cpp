// Compiled with -mavx2 (no -mfma). Only reached after a runtime CPU check.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace tactile::kernels::detail {

namespace {

inline __m256d clamp_pd(__m256d v, __m256d lo, __m256d hi) {
  return _mm256_min_pd(_mm256_max_pd(v, lo), hi);
}

void light_codes(const double* z, std::size_t n, const LightSweep& p,
                 std::int32_t* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d fs = _mm256_set1_pd(p.full_scale);
  const __m256d z_max = _mm256_set1_pd(p.z_max);
  const __m256d ambient = _mm256_set1_pd(p.ambient);
  const __m256d floor_frac = _mm256_set1_pd(p.floor_frac);
  const __m256d open = _mm256_set1_pd(1.0 - p.floor_frac);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = clamp_pd(_mm256_div_pd(_mm256_loadu_pd(z + i), z_max), zero, one);
    const __m256d x =
        _mm256_mul_pd(ambient, _mm256_add_pd(floor_frac, _mm256_mul_pd(open, r)));
    const __m256d code =
        _mm256_floor_pd(_mm256_add_pd(_mm256_mul_pd(fs, x), half));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i),
                     _mm256_cvttpd_epi32(clamp_pd(code, zero, fs)));
  }
  kScalarOps.light_codes(z + i, n - i, p, out + i);
}

void quantize_levels(const double* u, std::size_t n, int levels,
                     std::int32_t* out) {
  const __m256d minus_one = _mm256_set1_pd(-1.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d point_five = _mm256_set1_pd(0.5);
  const __m256d half = _mm256_set1_pd((levels - 1) * 0.5);
  const __m256d top = _mm256_set1_pd(levels - 1);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = clamp_pd(_mm256_loadu_pd(u + i), minus_one, one);
    const __m256d level = _mm256_floor_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_add_pd(c, one), half), point_five));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i),
                     _mm256_cvttpd_epi32(clamp_pd(level, zero, top)));
  }
  kScalarOps.quantize_levels(u + i, n - i, levels, out + i);
}

void percussive_block(double t0, double dt, std::size_t n, double t_decay,
                      double f_mod, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d vt0 = _mm256_set1_pd(t0);
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d decay = _mm256_set1_pd(t_decay);
  const __m256d freq = _mm256_set1_pd(f_mod);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d index = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_add_pd(vt0, _mm256_mul_pd(index, vdt));
    const __m256d env = _mm256_max_pd(_mm256_sub_pd(one, _mm256_div_pd(t, decay)), zero);
    const __m256d cycles = _mm256_mul_pd(freq, t);
    const __m256d phase = _mm256_sub_pd(cycles, _mm256_floor_pd(cycles));
    const __m256d folded =
        _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_mul_pd(four, phase), two));
    const __m256d tri = _mm256_sub_pd(folded, one);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(env, tri), zero));
    index = _mm256_add_pd(index, step);
  }
  for (; i < n; ++i) {
    out[i] = percussive_sample(t0 + static_cast<double>(i) * dt, t_decay, f_mod);
  }
}

inline double horizontal_sum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

Moments moments(const double* x, const double* y, std::size_t n) {
  __m256d sx = _mm256_setzero_pd();
  __m256d sy = _mm256_setzero_pd();
  __m256d sxx = _mm256_setzero_pd();
  __m256d syy = _mm256_setzero_pd();
  __m256d sxy = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    sx = _mm256_add_pd(sx, vx);
    sy = _mm256_add_pd(sy, vy);
    sxx = _mm256_add_pd(sxx, _mm256_mul_pd(vx, vx));
    syy = _mm256_add_pd(syy, _mm256_mul_pd(vy, vy));
    sxy = _mm256_add_pd(sxy, _mm256_mul_pd(vx, vy));
  }
  Moments m = kScalarOps.moments(x + i, y + i, n - i);
  m.sx += horizontal_sum(sx);
  m.sy += horizontal_sum(sy);
  m.sxx += horizontal_sum(sxx);
  m.syy += horizontal_sum(syy);
  m.sxy += horizontal_sum(sxy);
  return m;
}

const Ops kAvx2Ops{Isa::avx2, light_codes, quantize_levels, percussive_block,
                   moments};

}  // namespace

const Ops* avx2_table() { return &kAvx2Ops; }

}  // namespace tactile::kernels::detail
