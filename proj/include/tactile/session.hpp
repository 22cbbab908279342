#pragma once

// Fixed-step closed-loop session. One clock at the physics rate; sensor and
// actuator ticks fall on integer divisors of it. On a coincident tick the
// sensor is sampled first so the behaviour sees the freshest proximity.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tactile/actuation.hpp"
#include "tactile/behaviour.hpp"
#include "tactile/physics.hpp"
#include "tactile/sensing.hpp"

namespace tactile::session {

struct Keyframe {
  double t = 0.0;
  double z = 0.0;
  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

/// Piecewise-linear hand target. Holds the first/last keyframe outside the
/// covered interval.
struct Trajectory {
  std::string preset;  // empty for an explicit keyframe list
  std::vector<Keyframe> keyframes;

  static Trajectory from_preset(std::string_view name);
  physics::HandTarget at(double t) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

std::vector<std::string> preset_names();

struct SessionConfig {
  double duration_s = 3.0;
  std::uint64_t seed = 0;
  physics::PhysicsConfig physics;
  sensing::LightModel light;
  sensing::SensorConfig sensor;
  actuation::ActuatorConfig actuator;
  behaviour::BehaviourSpec behaviour;
  Trajectory trajectory = Trajectory::from_preset("percussive_strike");

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

struct SensorRow {
  double t = 0.0;
  int raw_code = 0;
  double proximity = 0.0;
  bool detected = false;
  bool trigger_fired = false;
  friend bool operator==(const SensorRow&, const SensorRow&) = default;
};

struct ActuatorRow {
  double t = 0.0;
  int level = 0;
  double u_q = 0.0;
  double current = 0.0;
  friend bool operator==(const ActuatorRow&, const ActuatorRow&) = default;
};

struct PhysicsRow {
  double t = 0.0;
  double z = 0.0;
  double v = 0.0;
  double force = 0.0;  // coil force applied over the following step
  friend bool operator==(const PhysicsRow&, const PhysicsRow&) = default;
};

struct SessionTrace {
  std::vector<SensorRow> sensor_rows;
  std::vector<ActuatorRow> actuator_rows;
  std::vector<PhysicsRow> physics_rows;
  std::vector<behaviour::SoundEvent> sound_events;
  SessionConfig meta;

  int trigger_count() const;

  friend bool operator==(const SessionTrace&, const SessionTrace&) = default;
};

/// Integer tick divisors derived from a validated config.
struct Clock {
  std::uint64_t physics_rate = 0;
  std::uint64_t sensor_div = 0;
  std::uint64_t actuator_div = 0;
  std::uint64_t total_ticks = 0;
};

/// Throws ConfigError naming the offending field.
Clock validate(const SessionConfig& cfg);

/// Same config with a near-rigid hand (k_hand x1000, c_hand x100).
SessionConfig rigid_hand(SessionConfig cfg);

/// What happened on one physics tick.
struct TickEvents {
  std::optional<SensorRow> sensor;
  std::optional<ActuatorRow> actuator;
  std::optional<behaviour::SoundEvent> sound;
};

/// Incremental session owner. run_session() drives it to completion; the live
/// service drives it against the wall clock with target overrides.
class Simulator {
public:
  /// Validates `cfg`. With `record` false, rows are not retained.
  explicit Simulator(SessionConfig cfg, bool record = true);

  TickEvents step();

  std::uint64_t tick() const { return tick_; }
  double time() const;
  const Clock& clock() const { return clock_; }
  const SessionConfig& config() const { return cfg_; }

  /// Replaces the scripted trajectory from the next tick on (v_target = 0).
  void set_target(double z_target);
  void clear_target();
  void set_behaviour(const behaviour::BehaviourSpec& spec);
  /// Forgets calibration; behaviour is disarmed until it is redone.
  void reset_calibration();

  const physics::MagnetState& magnet() const { return magnet_; }
  const SensorRow& last_sensor() const { return last_sensor_; }
  const ActuatorRow& last_actuator() const { return last_actuator_; }
  const behaviour::BehaviourState& behaviour_state() const { return behaviour_; }
  const sensing::CalibrationState& calibration() const { return calibration_; }

  const SessionTrace& trace() const { return trace_; }
  SessionTrace take_trace();

private:
  SensorRow sample_sensor(double t);

  SessionConfig cfg_;
  Clock clock_;
  bool record_;
  std::uint64_t tick_ = 0;
  std::uint64_t sensor_index_ = 0;
  std::uint64_t actuator_index_ = 0;

  physics::MagnetState magnet_;
  sensing::CalibrationState calibration_;
  sensing::NoiseSource noise_;
  behaviour::BehaviourState behaviour_;
  std::optional<double> prev_proximity_;
  std::optional<double> target_override_;
  double held_u_ = 0.0;

  SensorRow last_sensor_;
  ActuatorRow last_actuator_;
  SessionTrace trace_;
};

SessionTrace run_session(const SessionConfig& cfg);

/// Largest |normalized cross-correlation| between the actuator drive (held at
/// the sensor instants) and the first difference of proximity, for lags
/// 0..50 ms, over the active envelope after the first trigger.
/// nullopt when there is no trigger or fewer than two modulation periods of
/// trace after it.
std::optional<double> coupling_score(const SessionTrace& trace);

inline constexpr double kMaxCouplingLagS = 0.050;

}  // namespace tactile::session
