#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace tactile::kernels {

namespace detail {

#if !defined(TACTILE_HAVE_AVX2)
const Ops* avx2_table() { return nullptr; }
#endif
#if !defined(TACTILE_HAVE_NEON)
const Ops* neon_table() { return nullptr; }
#endif

}  // namespace detail

namespace {

const Ops* initial_selection() {
  if (const char* forced = std::getenv("TACTILE_SIMD")) {
    const std::string want{forced};
    if (want == "scalar") return &detail::kScalarOps;
    if (want == "avx2" && avx2_ops()) return avx2_ops();
    if (want == "neon" && neon_ops()) return neon_ops();
  }
  if (const Ops* ops = avx2_ops()) return ops;
  if (const Ops* ops = neon_ops()) return ops;
  return &detail::kScalarOps;
}

std::atomic<const Ops*>& selection() {
  static std::atomic<const Ops*> current{initial_selection()};
  return current;
}

}  // namespace

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const Ops& scalar_ops() { return detail::kScalarOps; }

const Ops* avx2_ops() {
#if defined(TACTILE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

// Advanced SIMD is mandatory on AArch64.
const Ops* neon_ops() { return detail::neon_table(); }

const Ops& active() { return *selection().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

bool select(Isa isa) {
  const Ops* ops = nullptr;
  switch (isa) {
    case Isa::scalar: ops = &detail::kScalarOps; break;
    case Isa::avx2: ops = avx2_ops(); break;
    case Isa::neon: ops = neon_ops(); break;
  }
  if (ops == nullptr) return false;
  selection().store(ops, std::memory_order_release);
  return true;
}

void light_codes(std::span<const double> z, const LightSweep& p,
                 std::span<std::int32_t> out) {
  active().light_codes(z.data(), std::min(z.size(), out.size()), p, out.data());
}

void quantize_levels(std::span<const double> u, int levels,
                     std::span<std::int32_t> out) {
  active().quantize_levels(u.data(), std::min(u.size(), out.size()), levels,
                           out.data());
}

void percussive_block(double t0, double dt, double t_decay, double f_mod,
                      std::span<double> out) {
  active().percussive_block(t0, dt, out.size(), t_decay, f_mod, out.data());
}

Moments moments(std::span<const double> x, std::span<const double> y) {
  return active().moments(x.data(), y.data(), std::min(x.size(), y.size()));
}

}  // namespace tactile::kernels
