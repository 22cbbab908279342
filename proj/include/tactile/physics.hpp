#pragma once

// Axial plant model: hand-held permanent magnet above a fixed coil.
//
// Sign convention: positive force pushes the magnet away from the coil
// (rejection), negative pulls it in (attraction).

#include <string>

namespace tactile::physics {

struct PhysicsConfig {
  double f_ref = 4.0;            // N, force magnitude at contact for |u| = 1
  double z0 = 0.02;              // m, decay length of the force law
  double m = 0.02;               // kg, effective moving mass (magnet + fingertips)
  double k_hand = 40.0;          // N/m
  double c_hand = 1.2;           // N*s/m
  double i_max = 2.0;            // A
  double z_floor = 0.001;        // m, contact stop
  double dt = 1.0 / 4000.0;      // s

  friend bool operator==(const PhysicsConfig&, const PhysicsConfig&) = default;
};

struct MagnetState {
  double z = 0.0;  // m above the coil
  double v = 0.0;  // m/s, positive = moving away
  double t = 0.0;  // s
};

struct HandTarget {
  double z_target = 0.0;
  double v_target = 0.0;
};

/// Throws ConfigError naming `prefix.<field>`. `actuator_rate_hz` bounds dt.
void validate(const PhysicsConfig& cfg, double actuator_rate_hz,
              const std::string& prefix = "physics");

/// Coil current for a normalized drive. Affine, never negative: attraction
/// comes from core magnetization at low current, not from reversing it.
double drive_to_current(double u, double i_max);

/// Net axial force F(u, z) = f_ref * u / (1 + z/z0)^4.
double coil_force(double u, double z, const PhysicsConfig& cfg);

/// One semi-implicit Euler step of
///   m*a = F_coil(u, z) + k_hand*(z_target - z) + c_hand*(v_target - v).
/// Velocity is updated first, then position. Contact with the floor is
/// inelastic: z is clamped to z_floor and v zeroed.
MagnetState step(const MagnetState& state, double u, const HandTarget& target,
                 const PhysicsConfig& cfg);

}  // namespace tactile::physics
