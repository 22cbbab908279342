#include "tactile/physics.hpp"

#include <algorithm>
#include <cmath>

#include "tactile/error.hpp"

namespace tactile::physics {

namespace {

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(field, "must be a finite value > 0");
  }
}

}  // namespace

void validate(const PhysicsConfig& cfg, double actuator_rate_hz,
              const std::string& prefix) {
  require_positive(cfg.f_ref, prefix + ".f_ref");
  require_positive(cfg.z0, prefix + ".z0");
  require_positive(cfg.m, prefix + ".m");
  require_positive(cfg.k_hand, prefix + ".k_hand");
  require_positive(cfg.c_hand, prefix + ".c_hand");
  require_positive(cfg.i_max, prefix + ".i_max");
  require_positive(cfg.z_floor, prefix + ".z_floor");
  require_positive(cfg.dt, prefix + ".dt");
  if (actuator_rate_hz > 0.0 && cfg.dt > 1.0 / (2.0 * actuator_rate_hz)) {
    throw ConfigError(prefix + ".dt", "must be <= 1/(2 * actuator rate)");
  }
}

double drive_to_current(double u, double i_max) {
  const double clamped = std::clamp(u, -1.0, 1.0);
  return i_max * (clamped + 1.0) / 2.0;
}

double coil_force(double u, double z, const PhysicsConfig& cfg) {
  const double s = 1.0 + z / cfg.z0;
  const double s2 = s * s;
  return cfg.f_ref * u / (s2 * s2);
}

MagnetState step(const MagnetState& state, double u, const HandTarget& target,
                 const PhysicsConfig& cfg) {
  const double force = coil_force(u, state.z, cfg) +
                       cfg.k_hand * (target.z_target - state.z) +
                       cfg.c_hand * (target.v_target - state.v);
  MagnetState next;
  next.v = state.v + force / cfg.m * cfg.dt;
  next.z = state.z + next.v * cfg.dt;
  next.t = state.t + cfg.dt;
  if (next.z < cfg.z_floor) {
    next.z = cfg.z_floor;
    next.v = 0.0;
  }
  return next;
}

}  // namespace tactile::physics
