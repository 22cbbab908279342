#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace tactile::kernels::detail {

namespace {

void light_codes(const double* z, std::size_t n, const LightSweep& p,
                 std::int32_t* out) {
  const double fs = p.full_scale;
  const double open = 1.0 - p.floor_frac;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::clamp(z[i] / p.z_max, 0.0, 1.0);
    const double x = p.ambient * (p.floor_frac + open * r);
    const double code = std::floor(fs * x + 0.5);
    out[i] = static_cast<std::int32_t>(std::clamp(code, 0.0, fs));
  }
}

void quantize_levels(const double* u, std::size_t n, int levels,
                     std::int32_t* out) {
  const double half = (levels - 1) * 0.5;
  const double top = levels - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::clamp(u[i], -1.0, 1.0);
    const double level = std::floor((c + 1.0) * half + 0.5);
    out[i] = static_cast<std::int32_t>(std::clamp(level, 0.0, top));
  }
}

void percussive_block(double t0, double dt, std::size_t n, double t_decay,
                      double f_mod, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = percussive_sample(t0 + static_cast<double>(i) * dt, t_decay, f_mod);
  }
}

Moments moments(const double* x, const double* y, std::size_t n) {
  Moments m;
  for (std::size_t i = 0; i < n; ++i) {
    m.sx += x[i];
    m.sy += y[i];
    m.sxx += x[i] * x[i];
    m.syy += y[i] * y[i];
    m.sxy += x[i] * y[i];
  }
  return m;
}

}  // namespace

const Ops kScalarOps{Isa::scalar, light_codes, quantize_levels, percussive_block,
                     moments};

}  // namespace tactile::kernels::detail
