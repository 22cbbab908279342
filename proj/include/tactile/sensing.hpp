#pragma once

// Light-occlusion proximity sensing: environment light model, 7-bit
// quantizer, running-extrema calibration and the detection threshold.

#include <cstdint>
#include <numbers>
#include <random>
#include <string>

namespace tactile::sensing {

struct LightModel {
  double ambient = 0.92;      // normalized environment light, (0, 1]
  double floor_frac = 0.06;   // residual light at full occlusion
  double flicker_amp = 0.0;   // fractional mains modulation depth
  double flicker_hz = 50.0;
  // Mains phase at t = 0. Sensor instants sit on a 100 Hz grid, so with a
  // zero phase every main-path sample would land on a zero crossing of the
  // 50 Hz component and the flicker would be invisible.
  double flicker_phase = std::numbers::pi / 2.0;
  double noise_amp = 0.3;     // uniform noise amplitude, codes
  std::uint64_t seed = 1;

  friend bool operator==(const LightModel&, const LightModel&) = default;
};

enum class InputPath { main, backup };

struct SensorConfig {
  int bits = 7;
  double rate_hz = 100.0;
  double threshold = 0.05;
  double z_max = 0.04;
  double backup_window_s = 0.020;
  InputPath input = InputPath::main;  // which path feeds calibration/proximity

  int full_scale() const { return (1 << bits) - 1; }

  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

/// Minimum calibrated span before proximity is reported.
inline constexpr int kMinCalibratedSpan = 8;

struct CalibrationState {
  int min_code = 0;
  int max_code = 0;
  std::uint64_t sample_count = 0;

  bool calibrated() const {
    return sample_count > 0 && max_code - min_code >= kMinCalibratedSpan;
  }
  friend bool operator==(const CalibrationState&, const CalibrationState&) = default;
};

struct SensorFrame {
  double t = 0.0;
  int raw_code = 0;
  double proximity = 0.0;  // 1 = touching, 0 = undetected
  bool detected = false;
  bool calibrated = false;
};

struct Proximity {
  double value = 0.0;
  bool detected = false;
};

void validate(const LightModel& model, const std::string& prefix = "light");
void validate(const SensorConfig& cfg, const std::string& prefix = "sensor");

/// Environment light reaching the sensor with the magnet at height z.
/// ambient(t) * (floor_frac + (1 - floor_frac) * clamp(z / z_max, 0, 1)).
double light_at_sensor(const LightModel& model, double z, double t, double z_max);

/// clamp(round_half_up(full_scale * x + noise), 0, full_scale).
int quantize(double x, double noise, int full_scale);
inline int quantize7(double x, double noise) { return quantize(x, noise, 127); }

CalibrationState calibrate_update(CalibrationState cal, int raw_code);

Proximity proximity_of(const CalibrationState& cal, int raw_code,
                       const SensorConfig& cfg);

/// One main-path sensor sample. Updates `cal` with the ingested code.
/// `noise` is the dither for this sample, in codes.
SensorFrame sample_main(const LightModel& model, double z, double t,
                        CalibrationState& cal, const SensorConfig& cfg,
                        double noise);

/// Mean light over the window [t - backup_window_s, t] with the magnet held at
/// z, evaluated in closed form.
double backup_light(const LightModel& model, double z, double t,
                    const SensorConfig& cfg);

/// Low-sensitivity backup input: the window mean, quantized.
int sample_backup(const LightModel& model, double z, double t,
                  const SensorConfig& cfg, double noise);

/// Distinct detected proximity codes over a 0.01 mm sweep of [0, z_max], after
/// a calibration sweep. Noise and flicker are forced off.
int effective_steps(const LightModel& model, const SensorConfig& cfg);

/// Seeded uniform dither in [-amp, +amp]. Bit-reproducible across platforms.
class NoiseSource {
public:
  explicit NoiseSource(std::uint64_t seed);

  double next(double amp);

private:
  std::mt19937_64 engine_;
};

}  // namespace tactile::sensing
