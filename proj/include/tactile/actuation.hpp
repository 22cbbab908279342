#pragma once

// Electromagnet output path. The drive signal is sampled instantaneously at
// the output rate (no filtering, no averaging) so block pulses survive, then
// quantized to a fixed number of levels between maximal attraction and
// maximal rejection.

#include <cstddef>
#include <span>
#include <string>

namespace tactile::actuation {

inline constexpr int kLevels = 26;

struct ActuatorConfig {
  int levels = kLevels;
  double rate_hz = 200.0;
  double control_rate_hz = 4000.0;
  double i_max = 2.0;

  std::size_t hold_ratio() const {
    return static_cast<std::size_t>(control_rate_hz / rate_hz + 0.5);
  }

  friend bool operator==(const ActuatorConfig&, const ActuatorConfig&) = default;
};

struct ActuatorFrame {
  double t = 0.0;
  int level = 0;
  double u_q = 0.0;
  double current = 0.0;
};

struct Quantized {
  int level = 0;
  double u_q = 0.0;
};

void validate(const ActuatorConfig& cfg, const std::string& prefix = "actuator");

/// Drive sample at the output instant frame_index / rate_hz. `drive` is
/// sampled at control_rate_hz starting at t = 0.
double downsample_hold(std::span<const double> drive, std::size_t frame_index,
                       const ActuatorConfig& cfg);

/// level = clamp(round_half_up((u + 1) * (levels - 1) / 2), 0, levels - 1).
Quantized quantize(double u, int levels);
inline Quantized quantize26(double u) { return quantize(u, kLevels); }

/// Frame for an already held drive sample.
ActuatorFrame frame_from_sample(double u, std::size_t frame_index,
                                const ActuatorConfig& cfg);

ActuatorFrame emit_frame(std::span<const double> drive, std::size_t frame_index,
                         const ActuatorConfig& cfg);

}  // namespace tactile::actuation
