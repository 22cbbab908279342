#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "tactile/behaviour.hpp"
#include "tactile/kernels.hpp"
#include "tactile/sensing.hpp"

using namespace tactile;

namespace {

std::vector<const kernels::Ops*> vector_variants() {
  std::vector<const kernels::Ops*> v;
  if (auto* ops = kernels::avx2_ops()) v.push_back(ops);
  if (auto* ops = kernels::neon_ops()) v.push_back(ops);
  return v;
}

// Odd lengths exercise the scalar tails.
constexpr std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 17, 1023, 4001};

}  // namespace

TEST_CASE("scalar light_codes matches the per-sample sensing path") {
  sensing::LightModel m;
  m.noise_amp = 0.0;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> z(-0.01, 0.06);
  std::vector<double> zs(5000);
  for (auto& v : zs) v = z(rng);
  std::vector<std::int32_t> out(zs.size());
  kernels::scalar_ops().light_codes(zs.data(), zs.size(), {m.ambient, m.floor_frac, 0.04, 127},
                                    out.data());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    CHECK(out[i] == sensing::quantize7(sensing::light_at_sensor(m, zs[i], 0.0, 0.04), 0.0));
  }
}

TEST_CASE("scalar percussive_block matches behaviour::percussive_drive") {
  behaviour::BehaviourSpec spec;
  std::vector<double> out(4000);
  kernels::scalar_ops().percussive_block(0.0, 1.0 / 4000, out.size(), spec.t_decay, spec.f_mod,
                                         out.data());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i] == behaviour::percussive_drive(static_cast<double>(i) * (1.0 / 4000), spec));
  }
}

TEST_CASE("vector variants are bit-identical to scalar") {
  const auto variants = vector_variants();
  if (variants.empty()) MESSAGE("no vector variant available on this CPU; scalar only");
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> wide(-1.5, 1.5);
  std::uniform_real_distribution<double> z(-0.01, 0.06);

  for (const kernels::Ops* ops : variants) {
    CAPTURE(kernels::name(ops->isa));
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      std::vector<double> zs(n), us(n);
      for (auto& v : zs) v = z(rng);
      for (auto& v : us) v = wide(rng);
      // Exact ties and endpoints.
      if (n > 4) {
        us[0] = 0.0;
        us[1] = -1.0;
        us[2] = 1.0;
        us[3] = -1.0 + 2.0 * 7.5 / 25.0;
        zs[0] = 0.0;
        zs[1] = 0.04;
        zs[2] = 0.02;
      }

      std::vector<std::int32_t> a(n), b(n);
      for (double ambient : {0.1, 0.88, 0.92, 1.0}) {
        const kernels::LightSweep p{ambient, 0.06, 0.04, 127};
        kernels::scalar_ops().light_codes(zs.data(), n, p, a.data());
        ops->light_codes(zs.data(), n, p, b.data());
        CHECK(a == b);
      }
      for (int levels : {26, 16, 2}) {
        kernels::scalar_ops().quantize_levels(us.data(), n, levels, a.data());
        ops->quantize_levels(us.data(), n, levels, b.data());
        CHECK(a == b);
      }
      std::vector<double> da(n), db(n);
      for (double t0 : {0.0, 0.4321, 0.79}) {
        kernels::scalar_ops().percussive_block(t0, 1.0 / 4000, n, 0.8, 30.0, da.data());
        ops->percussive_block(t0, 1.0 / 4000, n, 0.8, 30.0, db.data());
        REQUIRE(std::memcmp(da.data(), db.data(), n * sizeof(double)) == 0);
      }
      const kernels::Moments ma = kernels::scalar_ops().moments(zs.data(), us.data(), n);
      const kernels::Moments mb = ops->moments(zs.data(), us.data(), n);
      CHECK(mb.sx == doctest::Approx(ma.sx).epsilon(1e-12));
      CHECK(mb.sy == doctest::Approx(ma.sy).epsilon(1e-12));
      CHECK(mb.sxx == doctest::Approx(ma.sxx).epsilon(1e-12));
      CHECK(mb.syy == doctest::Approx(ma.syy).epsilon(1e-12));
      CHECK(mb.sxy == doctest::Approx(ma.sxy).epsilon(1e-12));
    }
  }
}

TEST_CASE("effective_steps is the same under every variant") {
  const int reference = [] {
    kernels::select(kernels::Isa::scalar);
    return sensing::effective_steps({}, {});
  }();
  for (kernels::Isa isa : {kernels::Isa::avx2, kernels::Isa::neon}) {
    if (!kernels::select(isa)) continue;
    CHECK(sensing::effective_steps({}, {}) == reference);
  }
  CHECK(reference == 105);
}

TEST_CASE("select refuses unavailable variants") {
  CHECK(kernels::select(kernels::Isa::scalar));
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  if (!kernels::avx2_ops()) CHECK_FALSE(kernels::select(kernels::Isa::avx2));
  if (!kernels::neon_ops()) CHECK_FALSE(kernels::select(kernels::Isa::neon));
}
