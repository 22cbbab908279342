#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tactile/sensing.hpp"

using namespace tactile::sensing;

namespace {

LightModel quiet(LightModel m = {}) {
  m.noise_amp = 0.0;
  m.flicker_amp = 0.0;
  return m;
}

double stddev(const std::vector<int>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double acc = 0.0;
  for (int x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / v.size());
}

}  // namespace

TEST_CASE("light_at_sensor examples") {
  LightModel m = quiet();
  const double z_max = 0.04;
  CHECK(light_at_sensor(m, z_max, 0.3, z_max) == doctest::Approx(m.ambient));
  CHECK(light_at_sensor(m, 0.09, 0.3, z_max) == doctest::Approx(m.ambient));
  CHECK(light_at_sensor(m, 0.0, 0.0, z_max) == doctest::Approx(m.ambient * m.floor_frac));
  LightModel open = m;
  open.ambient = 1.0;
  open.floor_frac = 0.0;
  CHECK(light_at_sensor(open, z_max / 2, 0.0, z_max) == doctest::Approx(0.5));
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = light_at_sensor(m, i * 1e-4, 0.0, z_max);
    CHECK(x >= prev);
    prev = x;
  }
}

TEST_CASE("quantize7 examples and monotonicity") {
  CHECK(quantize7(1.0, 0.0) == 127);
  CHECK(quantize7(0.0, 0.0) == 0);
  CHECK(quantize7(0.5, 0.0) == 64);
  CHECK(quantize7(1.7, 0.0) == 127);
  CHECK(quantize7(-0.2, 0.0) == 0);
  CHECK(quantize7(0.5, -0.01) == 63);
  int prev = 0;
  for (int i = 0; i <= 100000; ++i) {
    const int c = quantize7(i / 100000.0, 0.0);
    REQUIRE(c >= prev);
    prev = c;
  }
}

TEST_CASE("calibrate_update keeps running extrema") {
  CalibrationState cal = calibrate_update({}, 90);
  CHECK(cal.min_code == 90);
  CHECK(cal.max_code == 90);
  CHECK_FALSE(cal.calibrated());

  const std::vector<int> seq{90, 20, 120};
  CalibrationState a;
  for (int c : seq) a = calibrate_update(a, c);
  CHECK(a.min_code == 20);
  CHECK(a.max_code == 120);
  CHECK(a.calibrated());

  CalibrationState b = a;
  for (int c : seq) b = calibrate_update(b, c);
  CHECK(b.min_code == a.min_code);
  CHECK(b.max_code == a.max_code);

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> code(0, 127);
  CalibrationState c;
  for (int i = 0; i < 1000; ++i) {
    const CalibrationState next = calibrate_update(c, code(rng));
    if (i > 0) {
      CHECK(next.min_code <= c.min_code);
      CHECK(next.max_code >= c.max_code);
    }
    c = next;
  }
}

TEST_CASE("proximity_of examples") {
  SensorConfig cfg;
  CalibrationState cal{20, 120, 2};
  Proximity p = proximity_of(cal, 70, cfg);
  CHECK(p.value == doctest::Approx(0.5));
  CHECK(p.detected);

  p = proximity_of(cal, 117, cfg);
  CHECK(p.value == 0.0);
  CHECK_FALSE(p.detected);

  p = proximity_of(cal, 20, cfg);
  CHECK(p.value == 1.0);
  CHECK(p.detected);

  // Uncalibrated span (< 8 codes) is reported as undetected, not an error.
  p = proximity_of({60, 66, 10}, 60, cfg);
  CHECK(p.value == 0.0);
  CHECK_FALSE(p.detected);
}

TEST_CASE("proximity stays in [0, 1] for any code, including outside the range") {
  SensorConfig cfg;
  for (int lo = 0; lo < 128; lo += 7) {
    for (int hi = lo; hi < 128; hi += 5) {
      const CalibrationState cal{lo, hi, 5};
      for (int code = -5; code < 140; ++code) {
        const Proximity p = proximity_of(cal, code, cfg);
        REQUIRE(p.value >= 0.0);
        REQUIRE(p.value <= 1.0);
        if (!p.detected) REQUIRE(p.value == 0.0);
      }
    }
  }
}

TEST_CASE("sample_main composes light, quantizer, calibration and proximity") {
  SensorConfig cfg;
  const LightModel m = quiet();

  SUBCASE("out of range magnet is never detected") {
    CalibrationState cal;
    for (int i = 0; i < 100; ++i) {
      const SensorFrame f = sample_main(m, cfg.z_max, i / 100.0, cal, cfg, 0.0);
      CHECK_FALSE(f.detected);
      CHECK(f.proximity == 0.0);
    }
  }
  SUBCASE("a full approach calibrates; holding at the surface reads ~1") {
    CalibrationState cal;
    SensorFrame last;
    for (int i = 0; i <= 100; ++i) {
      const double z = cfg.z_max * (1.0 - std::min(1.0, i / 50.0));
      last = sample_main(m, z, i / 100.0, cal, cfg, 0.0);
      CHECK(last.raw_code >= 0);
      CHECK(last.raw_code <= 127);
    }
    CHECK(last.detected);
    CHECK(last.proximity == doctest::Approx(1.0));
  }
  SUBCASE("same seed gives the same frames") {
    auto run = [&] {
      LightModel noisy;
      NoiseSource noise(42);
      CalibrationState cal;
      std::vector<int> codes;
      for (int i = 0; i < 300; ++i) {
        codes.push_back(
            sample_main(noisy, 0.02 + 0.01 * std::sin(i * 0.1), i / 100.0, cal, cfg, noise.next(0.3))
                .raw_code);
      }
      return codes;
    };
    CHECK(run() == run());
  }
}

TEST_CASE("slow ambient drift below the threshold never reads as an approach") {
  SensorConfig cfg;
  // Calibrated against the default light: full-scale code 117.
  LightModel m = quiet();
  CalibrationState cal;
  for (int i = 0; i <= 400; ++i) sample_main(m, cfg.z_max - i * 1e-4, 0.0, cal, cfg, 0.0);
  REQUIRE(cal.calibrated());
  const double span = cal.max_code - cal.min_code;

  auto detections = [&](double frac) {
    CalibrationState c = cal;
    int hits = 0;
    for (int i = 0; i < 6000; ++i) {
      LightModel drifted = m;
      drifted.ambient = (c.max_code - frac * span * i / 5999.0) / 127.0;
      hits += sample_main(drifted, 0.06, i / 100.0, c, cfg, 0.0).detected;
    }
    return hits;
  };
  CHECK(detections(0.049) == 0);
  CHECK(detections(0.051) >= 1);
}

TEST_CASE("backup input nulls 50 Hz flicker") {
  SensorConfig cfg;
  LightModel m;
  m.flicker_amp = 0.3;
  const double z = cfg.z_max / 2;

  SUBCASE("closed-form window mean agrees with 1 us integration") {
    for (double t : {0.02, 0.1234, 0.5, 1.987}) {
      const double occl = m.floor_frac + (1.0 - m.floor_frac) * 0.5;
      const double ref = oracle::window_mean_ambient(m.ambient, m.flicker_amp, m.flicker_hz,
                                                     m.flicker_phase, t, cfg.backup_window_s) *
                         occl;
      CHECK(backup_light(m, z, t, cfg) == doctest::Approx(ref).epsilon(1e-9));
    }
    // A window that is not a whole mains period does not null it.
    SensorConfig odd = cfg;
    odd.backup_window_s = 0.013;
    const double ref = oracle::window_mean_ambient(m.ambient, m.flicker_amp, m.flicker_hz,
                                                   m.flicker_phase, 0.3, 0.013);
    CHECK(backup_light(m, 1.0, 0.3, odd) == doctest::Approx(ref).epsilon(1e-9));
  }
  SUBCASE("backup jitter < 0.6 LSB while the main path swings") {
    NoiseSource noise(5);
    CalibrationState cal;
    std::vector<int> main_codes, backup_codes;
    for (int i = 0; i < 200; ++i) {
      const double t = i / 100.0;
      const double n = noise.next(m.noise_amp);
      main_codes.push_back(sample_main(m, z, t, cal, cfg, n).raw_code);
      backup_codes.push_back(sample_backup(m, z, t, cfg, n));
    }
    CHECK(stddev(backup_codes) < 0.6);
    const int p2p = *std::max_element(main_codes.begin(), main_codes.end()) -
                    *std::min_element(main_codes.begin(), main_codes.end());
    // Main-path extrema sampled at the mains peaks, with dither +/-0.3.
    const double mid = 127.0 * m.ambient * 0.53;
    const int analytic = static_cast<int>(std::floor(mid * 1.3 + 0.5)) -
                         static_cast<int>(std::floor(mid * 0.7 + 0.5));
    CHECK(std::abs(p2p - analytic) <= 1);
    CHECK(p2p >= std::lround(127 * 0.88 * 0.3 * 0.94));
  }
  SUBCASE("without flicker backup equals main for a static magnet") {
    LightModel steady;
    CalibrationState cal;
    NoiseSource noise(9);
    for (int i = 0; i < 100; ++i) {
      const double n = noise.next(steady.noise_amp);
      const double zz = 0.001 * (i % 40);
      CHECK(sample_main(steady, zz, i / 100.0, cal, cfg, n).raw_code ==
            sample_backup(steady, zz, i / 100.0, cfg, n));
    }
  }
}

TEST_CASE("effective resolution matches the brute-force sweep") {
  SensorConfig cfg;
  const int dflt = effective_steps(LightModel{}, cfg);
  CHECK(dflt == oracle::brute_force_steps(0.92, 0.06));
  CHECK(dflt >= 100);
  CHECK(dflt <= 110);
  CHECK(dflt == 105);

  LightModel bright;
  bright.ambient = 1.0;
  bright.floor_frac = 0.0;
  CHECK(effective_steps(bright, cfg) == oracle::brute_force_steps(1.0, 0.0));
  CHECK(effective_steps(bright, cfg) == 121);

  LightModel dim;
  dim.ambient = 0.1;
  CHECK(effective_steps(dim, cfg) == oracle::brute_force_steps(0.1, 0.06));
  CHECK(effective_steps(dim, cfg) < dflt);

  // Noise and flicker in the model are ignored by the sweep.
  LightModel noisy;
  noisy.flicker_amp = 0.5;
  noisy.noise_amp = 2.0;
  CHECK(effective_steps(noisy, cfg) == dflt);
}

TEST_CASE("NoiseSource is bounded and seed-reproducible") {
  NoiseSource a(11), b(11), c(12);
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const double x = a.next(0.3);
    CHECK(std::fabs(x) <= 0.3);
    CHECK(x == b.next(0.3));
    differs = differs || x != c.next(0.3);
  }
  CHECK(differs);
}
