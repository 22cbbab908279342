#include "tactile/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tactile/error.hpp"
#include "tactile/kernels.hpp"

namespace tactile::sensing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSweepStep = 1e-5;  // 0.01 mm

double occlusion(const LightModel& model, double z, double z_max) {
  const double r = std::clamp(z / z_max, 0.0, 1.0);
  return model.floor_frac + (1.0 - model.floor_frac) * r;
}

}  // namespace

void validate(const LightModel& model, const std::string& prefix) {
  if (!(model.ambient > 0.0 && model.ambient <= 1.0)) {
    throw ConfigError(prefix + ".ambient", "must be in (0, 1]");
  }
  if (!(model.floor_frac >= 0.0 && model.floor_frac < 1.0)) {
    throw ConfigError(prefix + ".floor_frac", "must be in [0, 1)");
  }
  if (!(model.flicker_amp >= 0.0 && model.flicker_amp < 1.0)) {
    throw ConfigError(prefix + ".flicker_amp", "must be in [0, 1)");
  }
  if (!(model.flicker_hz >= 0.0) || !std::isfinite(model.flicker_hz)) {
    throw ConfigError(prefix + ".flicker_hz", "must be a finite value >= 0");
  }
  if (!std::isfinite(model.flicker_phase)) {
    throw ConfigError(prefix + ".flicker_phase", "must be finite");
  }
  if (!(model.noise_amp >= 0.0) || !std::isfinite(model.noise_amp)) {
    throw ConfigError(prefix + ".noise_amp", "must be a finite value >= 0");
  }
}

void validate(const SensorConfig& cfg, const std::string& prefix) {
  if (cfg.bits < 4 || cfg.bits > 16) {
    throw ConfigError(prefix + ".bits", "must be in [4, 16]");
  }
  if (!(cfg.rate_hz > 0.0) || !std::isfinite(cfg.rate_hz)) {
    throw ConfigError(prefix + ".rate_hz", "must be a finite value > 0");
  }
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    throw ConfigError(prefix + ".threshold", "must be in (0, 1)");
  }
  if (!(cfg.z_max > 0.0) || !std::isfinite(cfg.z_max)) {
    throw ConfigError(prefix + ".z_max", "must be a finite value > 0");
  }
  if (!(cfg.backup_window_s > 0.0) || !std::isfinite(cfg.backup_window_s)) {
    throw ConfigError(prefix + ".backup_window_s", "must be a finite value > 0");
  }
}

double light_at_sensor(const LightModel& model, double z, double t, double z_max) {
  const double mains = std::sin(kTwoPi * model.flicker_hz * t + model.flicker_phase);
  const double ambient_now = model.ambient * (1.0 + model.flicker_amp * mains);
  return ambient_now * occlusion(model, z, z_max);
}

int quantize(double x, double noise, int full_scale) {
  const double fs = full_scale;
  const double code = std::floor(fs * x + noise + 0.5);
  return static_cast<int>(std::clamp(code, 0.0, fs));
}

CalibrationState calibrate_update(CalibrationState cal, int raw_code) {
  if (cal.sample_count == 0) {
    cal.min_code = raw_code;
    cal.max_code = raw_code;
  } else {
    cal.min_code = std::min(cal.min_code, raw_code);
    cal.max_code = std::max(cal.max_code, raw_code);
  }
  ++cal.sample_count;
  return cal;
}

Proximity proximity_of(const CalibrationState& cal, int raw_code,
                       const SensorConfig& cfg) {
  if (!cal.calibrated()) return {};
  const double span = cal.max_code - cal.min_code;
  const double p_raw = std::clamp((cal.max_code - raw_code) / span, 0.0, 1.0);
  if (p_raw < cfg.threshold) return {};
  return {p_raw, true};
}

SensorFrame sample_main(const LightModel& model, double z, double t,
                        CalibrationState& cal, const SensorConfig& cfg,
                        double noise) {
  SensorFrame frame;
  frame.t = t;
  frame.raw_code =
      quantize(light_at_sensor(model, z, t, cfg.z_max), noise, cfg.full_scale());
  cal = calibrate_update(cal, frame.raw_code);
  const Proximity p = proximity_of(cal, frame.raw_code, cfg);
  frame.proximity = p.value;
  frame.detected = p.detected;
  frame.calibrated = cal.calibrated();
  return frame;
}

double backup_light(const LightModel& model, double z, double t,
                    const SensorConfig& cfg) {
  const double w = cfg.backup_window_s;
  const double omega = kTwoPi * model.flicker_hz;
  double mean_mains = 0.0;
  if (omega * w == 0.0) {
    mean_mains = std::sin(omega * t + model.flicker_phase);
  } else {
    // Integral of sin(omega*s + phase) over [t - w, t], divided by w.
    mean_mains = (std::cos(omega * (t - w) + model.flicker_phase) -
                  std::cos(omega * t + model.flicker_phase)) /
                 (omega * w);
  }
  const double ambient_mean = model.ambient * (1.0 + model.flicker_amp * mean_mains);
  return ambient_mean * occlusion(model, z, cfg.z_max);
}

int sample_backup(const LightModel& model, double z, double t,
                  const SensorConfig& cfg, double noise) {
  return quantize(backup_light(model, z, t, cfg), noise, cfg.full_scale());
}

int effective_steps(const LightModel& model, const SensorConfig& cfg) {
  const auto n = static_cast<std::size_t>(std::llround(cfg.z_max / kSweepStep)) + 1;
  const double step = cfg.z_max / static_cast<double>(n - 1);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<double>(i) * step;

  std::vector<std::int32_t> codes(n);
  const kernels::LightSweep sweep{model.ambient, model.floor_frac, cfg.z_max,
                                  cfg.full_scale()};
  kernels::light_codes(z, sweep, codes);

  // Calibration pass: full movement from z_max down to the surface.
  CalibrationState cal;
  for (std::size_t i = n; i-- > 0;) cal = calibrate_update(cal, codes[i]);

  std::vector<bool> seen(static_cast<std::size_t>(cfg.full_scale()) + 1, false);
  int steps = 0;
  for (const std::int32_t code : codes) {
    if (!proximity_of(cal, code, cfg).detected) continue;
    if (!seen[static_cast<std::size_t>(code)]) {
      seen[static_cast<std::size_t>(code)] = true;
      ++steps;
    }
  }
  return steps;
}

NoiseSource::NoiseSource(std::uint64_t seed) : engine_(seed) {}

double NoiseSource::next(double amp) {
  // mt19937_64 output is fixed by the standard; the mapping to [0, 1) is done
  // here because std::uniform_real_distribution is implementation-defined.
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return amp * (2.0 * unit - 1.0);
}

}  // namespace tactile::sensing
