#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <tuple>
#include <vector>

#include "tactile/actuation.hpp"
#include "tactile/error.hpp"

using namespace tactile::actuation;

TEST_CASE("quantize26 endpoints and tie-break") {
  Quantized q = quantize26(1.0);
  CHECK(q.level == 25);
  CHECK(q.u_q == 1.0);
  q = quantize26(-1.0);
  CHECK(q.level == 0);
  CHECK(q.u_q == -1.0);
  q = quantize26(0.0);
  CHECK(q.level == 13);
  CHECK(q.u_q == doctest::Approx(0.04));
  CHECK(quantize26(5.0).level == 25);
  CHECK(quantize26(-5.0).level == 0);
}

TEST_CASE("26-level census: exactly 26 triples, monotone, idempotent") {
  const ActuatorConfig cfg;
  std::set<std::tuple<int, double, double>> triples;
  int prev = -1;
  for (int i = 0; i <= 20000; ++i) {
    const double u = -1.0 + i * 1e-4;
    const ActuatorFrame f = frame_from_sample(u, 0, cfg);
    triples.insert({f.level, f.u_q, f.current});
    REQUIRE(f.level >= prev);
    prev = f.level;
    REQUIRE(quantize26(f.u_q).level == f.level);
    REQUIRE(f.u_q == doctest::Approx(-1.0 + 2.0 * f.level / 25.0));
    REQUIRE(f.current == doctest::Approx(2.0 * f.level / 25.0).epsilon(1e-12));
  }
  CHECK(triples.size() == 26);
  CHECK(std::get<0>(*triples.begin()) == 0);
  CHECK(std::get<0>(*triples.rbegin()) == 25);
}

TEST_CASE("downsample_hold samples instantaneously") {
  const ActuatorConfig cfg;
  const std::size_t ratio = cfg.hold_ratio();
  REQUIRE(ratio == 20);

  SUBCASE("constant drive") {
    const std::vector<double> drive(4000, 0.7);
    for (std::size_t f = 0; f < 200; ++f) CHECK(downsample_hold(drive, f, cfg) == 0.7);
  }
  SUBCASE("100 Hz full-swing square wave keeps full amplitude") {
    std::vector<double> drive(4000);
    for (std::size_t i = 0; i < drive.size(); ++i) drive[i] = (i / 20) % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t f = 0; f < 200; ++f) {
      const ActuatorFrame out = emit_frame(drive, f, cfg);
      CHECK(out.u_q == (f % 2 == 0 ? 1.0 : -1.0));
      CHECK(out.level == (f % 2 == 0 ? 25 : 0));
    }
  }
  SUBCASE("a spike between frame instants is not seen") {
    std::vector<double> drive(4000, 0.0);
    drive[31] = 1.0;
    for (std::size_t f = 0; f < 200; ++f) CHECK(downsample_hold(drive, f, cfg) == 0.0);
  }
  SUBCASE("reading past the signal throws") {
    const std::vector<double> drive(40, 0.0);
    CHECK_THROWS_AS(downsample_hold(drive, 2, cfg), std::out_of_range);
  }
}

TEST_CASE("emit_frame examples") {
  const ActuatorConfig cfg;
  const std::vector<double> zero(4000, 0.0), full(4000, 1.0);
  for (std::size_t f = 0; f < 200; ++f) {
    const ActuatorFrame z = emit_frame(zero, f, cfg);
    CHECK(z.level == 13);
    CHECK(z.current == doctest::Approx(1.04));
    CHECK(z.t == doctest::Approx(f * 0.005));
    CHECK(emit_frame(full, f, cfg).current == 2.0);
  }
  CHECK(emit_frame(std::vector<double>(4000, -1.0), 0, cfg).current == 0.0);
}

TEST_CASE("step latency: a full-swing step lands within one frame, no ramp") {
  const ActuatorConfig cfg;
  for (std::size_t edge : {37u, 40u, 41u, 59u}) {
    std::vector<double> drive(200, -1.0);
    for (std::size_t i = edge; i < drive.size(); ++i) drive[i] = 1.0;
    std::set<int> levels;
    std::size_t first_high = 0;
    for (std::size_t f = 0; f < 10; ++f) {
      const int level = emit_frame(drive, f, cfg).level;
      levels.insert(level);
      if (level == 25 && first_high == 0) first_high = f;
    }
    CHECK(levels == std::set<int>{0, 25});
    CHECK(first_high * 0.005 - edge / 4000.0 <= 0.005 + 1e-12);
  }
}

TEST_CASE("validate") {
  ActuatorConfig bad;
  bad.control_rate_hz = 4100;
  CHECK_THROWS_AS(validate(bad), tactile::ConfigError);
  CHECK_NOTHROW(validate(ActuatorConfig{}));
}
