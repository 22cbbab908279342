// AArch64 Advanced SIMD variant, two doubles per lane group.

#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace tactile::kernels::detail {

namespace {

inline float64x2_t clamp_f64(float64x2_t v, float64x2_t lo, float64x2_t hi) {
  return vminq_f64(vmaxq_f64(v, lo), hi);
}

inline void store_i32x2(std::int32_t* out, float64x2_t v) {
  const int32x2_t narrow = vmovn_s64(vcvtq_s64_f64(v));
  vst1_s32(out, narrow);
}

void light_codes(const double* z, std::size_t n, const LightSweep& p,
                 std::int32_t* out) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t fs = vdupq_n_f64(p.full_scale);
  const float64x2_t z_max = vdupq_n_f64(p.z_max);
  const float64x2_t ambient = vdupq_n_f64(p.ambient);
  const float64x2_t floor_frac = vdupq_n_f64(p.floor_frac);
  const float64x2_t open = vdupq_n_f64(1.0 - p.floor_frac);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = clamp_f64(vdivq_f64(vld1q_f64(z + i), z_max), zero, one);
    const float64x2_t x = vmulq_f64(ambient, vaddq_f64(floor_frac, vmulq_f64(open, r)));
    const float64x2_t code = vrndmq_f64(vaddq_f64(vmulq_f64(fs, x), half));
    store_i32x2(out + i, clamp_f64(code, zero, fs));
  }
  kScalarOps.light_codes(z + i, n - i, p, out + i);
}

void quantize_levels(const double* u, std::size_t n, int levels,
                     std::int32_t* out) {
  const float64x2_t minus_one = vdupq_n_f64(-1.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t point_five = vdupq_n_f64(0.5);
  const float64x2_t half = vdupq_n_f64((levels - 1) * 0.5);
  const float64x2_t top = vdupq_n_f64(levels - 1);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t c = clamp_f64(vld1q_f64(u + i), minus_one, one);
    const float64x2_t level =
        vrndmq_f64(vaddq_f64(vmulq_f64(vaddq_f64(c, one), half), point_five));
    store_i32x2(out + i, clamp_f64(level, zero, top));
  }
  kScalarOps.quantize_levels(u + i, n - i, levels, out + i);
}

void percussive_block(double t0, double dt, std::size_t n, double t_decay,
                      double f_mod, double* out) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t two = vdupq_n_f64(2.0);
  const float64x2_t four = vdupq_n_f64(4.0);
  const float64x2_t vt0 = vdupq_n_f64(t0);
  const float64x2_t vdt = vdupq_n_f64(dt);
  const float64x2_t decay = vdupq_n_f64(t_decay);
  const float64x2_t freq = vdupq_n_f64(f_mod);
  const double lanes[2] = {0.0, 1.0};
  float64x2_t index = vld1q_f64(lanes);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = vaddq_f64(vt0, vmulq_f64(index, vdt));
    const float64x2_t env = vmaxq_f64(vsubq_f64(one, vdivq_f64(t, decay)), zero);
    const float64x2_t cycles = vmulq_f64(freq, t);
    const float64x2_t phase = vsubq_f64(cycles, vrndmq_f64(cycles));
    const float64x2_t tri = vsubq_f64(vabsq_f64(vsubq_f64(vmulq_f64(four, phase), two)), one);
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(env, tri), zero));
    index = vaddq_f64(index, two);
  }
  for (; i < n; ++i) {
    out[i] = percussive_sample(t0 + static_cast<double>(i) * dt, t_decay, f_mod);
  }
}

Moments moments(const double* x, const double* y, std::size_t n) {
  float64x2_t sx = vdupq_n_f64(0.0);
  float64x2_t sy = sx;
  float64x2_t sxx = sx;
  float64x2_t syy = sx;
  float64x2_t sxy = sx;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    sx = vaddq_f64(sx, vx);
    sy = vaddq_f64(sy, vy);
    sxx = vaddq_f64(sxx, vmulq_f64(vx, vx));
    syy = vaddq_f64(syy, vmulq_f64(vy, vy));
    sxy = vaddq_f64(sxy, vmulq_f64(vx, vy));
  }
  Moments m = kScalarOps.moments(x + i, y + i, n - i);
  m.sx += vaddvq_f64(sx);
  m.sy += vaddvq_f64(sy);
  m.sxx += vaddvq_f64(sxx);
  m.syy += vaddvq_f64(syy);
  m.sxy += vaddvq_f64(sxy);
  return m;
}

const Ops kNeonOps{Isa::neon, light_codes, quantize_levels, percussive_block,
                   moments};

}  // namespace

const Ops* neon_table() { return &kNeonOps; }

}  // namespace tactile::kernels::detail
