#include "tactile/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tactile/error.hpp"
#include "tactile/physics.hpp"

namespace tactile::actuation {

void validate(const ActuatorConfig& cfg, const std::string& prefix) {
  if (cfg.levels < 2) {
    throw ConfigError(prefix + ".levels", "must be >= 2");
  }
  if (!(cfg.rate_hz > 0.0) || !std::isfinite(cfg.rate_hz)) {
    throw ConfigError(prefix + ".rate_hz", "must be a finite value > 0");
  }
  if (!(cfg.control_rate_hz > 0.0) || !std::isfinite(cfg.control_rate_hz)) {
    throw ConfigError(prefix + ".control_rate_hz", "must be a finite value > 0");
  }
  const double ratio = cfg.control_rate_hz / cfg.rate_hz;
  if (ratio < 1.0 || std::fabs(ratio - std::round(ratio)) > 1e-9) {
    throw ConfigError(prefix + ".control_rate_hz",
                      "must be an integer multiple of rate_hz");
  }
  if (!(cfg.i_max > 0.0) || !std::isfinite(cfg.i_max)) {
    throw ConfigError(prefix + ".i_max", "must be a finite value > 0");
  }
}

double downsample_hold(std::span<const double> drive, std::size_t frame_index,
                       const ActuatorConfig& cfg) {
  const std::size_t at = frame_index * cfg.hold_ratio();
  if (at >= drive.size()) {
    throw std::out_of_range("downsample_hold: drive signal ends before frame " +
                            std::to_string(frame_index));
  }
  return drive[at];
}

Quantized quantize(double u, int levels) {
  const double top = levels - 1;
  const double c = std::clamp(u, -1.0, 1.0);
  const double level = std::clamp(std::floor((c + 1.0) * (top * 0.5) + 0.5), 0.0, top);
  Quantized q;
  q.level = static_cast<int>(level);
  q.u_q = -1.0 + 2.0 * level / top;
  return q;
}

ActuatorFrame frame_from_sample(double u, std::size_t frame_index,
                                const ActuatorConfig& cfg) {
  const Quantized q = quantize(u, cfg.levels);
  ActuatorFrame frame;
  frame.t = static_cast<double>(frame_index) / cfg.rate_hz;
  frame.level = q.level;
  frame.u_q = q.u_q;
  frame.current = physics::drive_to_current(q.u_q, cfg.i_max);
  return frame;
}

ActuatorFrame emit_frame(std::span<const double> drive, std::size_t frame_index,
                         const ActuatorConfig& cfg) {
  return frame_from_sample(downsample_hold(drive, frame_index, cfg), frame_index, cfg);
}

}  // namespace tactile::actuation
