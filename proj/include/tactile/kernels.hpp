#pragma once

// Batch inner loops with a scalar reference and vector variants.
//
// Every variant must agree with the scalar reference: bit-exactly for the
// code/level/drive kernels (same IEEE operations in the same order, no FMA
// contraction), and to rounding for the reductions in `moments`.
// The active variant is picked once at startup from CPU features; the
// TACTILE_SIMD environment variable (scalar|avx2|neon) overrides it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace tactile::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view name(Isa isa);

struct LightSweep {
  double ambient = 1.0;
  double floor_frac = 0.0;
  double z_max = 1.0;
  int full_scale = 127;
};

struct Moments {
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

struct Ops {
  Isa isa;
  // Flicker-free, noiseless light level at each z, quantized.
  void (*light_codes)(const double* z, std::size_t n, const LightSweep& p,
                      std::int32_t* out);
  // Drive -> output level for an L-level quantizer (round half up).
  void (*quantize_levels)(const double* u, std::size_t n, int levels,
                          std::int32_t* out);
  // Percussive drive sampled at t0 + i*dt.
  void (*percussive_block)(double t0, double dt, std::size_t n, double t_decay,
                           double f_mod, double* out);
  Moments (*moments)(const double* x, const double* y, std::size_t n);
};

const Ops& scalar_ops();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const Ops* avx2_ops();
const Ops* neon_ops();

const Ops& active();
Isa active_isa();
/// Returns false (and leaves the selection alone) if `isa` is unavailable.
bool select(Isa isa);

void light_codes(std::span<const double> z, const LightSweep& p,
                 std::span<std::int32_t> out);
void quantize_levels(std::span<const double> u, int levels,
                     std::span<std::int32_t> out);
void percussive_block(double t0, double dt, double t_decay, double f_mod,
                      std::span<double> out);
Moments moments(std::span<const double> x, std::span<const double> y);

}  // namespace tactile::kernels
