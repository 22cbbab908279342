#pragma once

#include <algorithm>
#include <cmath>

#include "tactile/kernels.hpp"

namespace tactile::kernels::detail {

// Reference percussive drive. env * tri with a linear envelope and a unit
// triangle that starts at its +1 peak. The trailing + 0.0 folds -0 into +0.
inline double percussive_sample(double t, double t_decay, double f_mod) {
  const double env = std::max(0.0, 1.0 - t / t_decay);
  const double cycles = f_mod * t;
  const double phase = cycles - std::floor(cycles);
  const double tri = std::fabs(4.0 * phase - 2.0) - 1.0;
  return env * tri + 0.0;
}

extern const Ops kScalarOps;
// Defined only when the matching translation unit is compiled in.
const Ops* avx2_table();
const Ops* neon_table();

}  // namespace tactile::kernels::detail
