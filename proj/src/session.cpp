#include "tactile/session.hpp"

#include <algorithm>
#include <cmath>

#include "tactile/error.hpp"
#include "tactile/kernels.hpp"

namespace tactile::session {

namespace {

std::uint64_t integer_ratio(double num, double den, const std::string& field,
                            const std::string& what) {
  const double ratio = num / den;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-6 * rounded) {
    throw ConfigError(field, what);
  }
  return static_cast<std::uint64_t>(rounded);
}

std::uint64_t mix_seed(std::uint64_t session_seed, std::uint64_t light_seed) {
  return light_seed ^ (session_seed * 0x9E3779B97F4A7C15ULL);
}

}  // namespace

// --- Trajectory -------------------------------------------------------------

Trajectory Trajectory::from_preset(std::string_view name) {
  Trajectory tr;
  tr.preset = std::string{name};
  if (name == "percussive_strike") {
    // Calibration movement after switch-on (full approach and back out),
    // then the strike: 4 cm -> 0.5 cm in 150 ms, hold 1 s, retreat.
    tr.keyframes = {{0.0, 0.05},   {0.40, 0.0},  {0.55, 0.0},  {0.95, 0.05},
                    {1.20, 0.04},  {1.35, 0.005}, {2.35, 0.005}, {2.65, 0.05}};
  } else if (name == "calibration_sweep") {
    tr.keyframes = {{0.0, 0.05}, {0.40, 0.0}, {0.55, 0.0}, {0.95, 0.05}};
  } else if (name == "hover") {
    tr.keyframes = {{0.0, 0.06}};
  } else {
    throw ConfigError("trajectory.preset", "unknown preset '" + tr.preset + "'");
  }
  return tr;
}

std::vector<std::string> preset_names() {
  return {"percussive_strike", "calibration_sweep", "hover"};
}

physics::HandTarget Trajectory::at(double t) const {
  if (keyframes.empty()) return {};
  if (t <= keyframes.front().t) return {keyframes.front().z, 0.0};
  if (t >= keyframes.back().t) return {keyframes.back().z, 0.0};
  const auto upper = std::upper_bound(
      keyframes.begin(), keyframes.end(), t,
      [](double value, const Keyframe& k) { return value < k.t; });
  const Keyframe& b = *upper;
  const Keyframe& a = *(upper - 1);
  const double slope = (b.z - a.z) / (b.t - a.t);
  return {a.z + slope * (t - a.t), slope};
}

// --- Config -----------------------------------------------------------------

Clock validate(const SessionConfig& cfg) {
  if (!(cfg.duration_s >= 0.0) || !std::isfinite(cfg.duration_s)) {
    throw ConfigError("duration_s", "must be a finite value >= 0");
  }
  actuation::validate(cfg.actuator);
  physics::validate(cfg.physics, cfg.actuator.rate_hz);
  sensing::validate(cfg.light);
  sensing::validate(cfg.sensor);
  behaviour::validate(cfg.behaviour, cfg.actuator.control_rate_hz);

  if (cfg.trajectory.keyframes.empty()) {
    throw ConfigError("trajectory.keyframes", "must not be empty");
  }
  for (std::size_t i = 0; i < cfg.trajectory.keyframes.size(); ++i) {
    const Keyframe& k = cfg.trajectory.keyframes[i];
    const std::string field = "trajectory.keyframes[" + std::to_string(i) + "]";
    if (!std::isfinite(k.t) || !std::isfinite(k.z)) {
      throw ConfigError(field, "must be finite");
    }
    if (k.z < 0.0) throw ConfigError(field, "z_target must be >= 0");
    if (i > 0 && !(k.t > cfg.trajectory.keyframes[i - 1].t)) {
      throw ConfigError(field, "keyframe times must be strictly increasing");
    }
  }

  Clock clock;
  clock.physics_rate = integer_ratio(1.0, cfg.physics.dt, "physics.dt",
                                     "1/dt must be an integer rate");
  const double rate = static_cast<double>(clock.physics_rate);
  clock.sensor_div = integer_ratio(rate, cfg.sensor.rate_hz, "sensor.rate_hz",
                                   "must divide the physics rate");
  clock.actuator_div = integer_ratio(rate, cfg.actuator.rate_hz, "actuator.rate_hz",
                                     "must divide the physics rate");
  integer_ratio(rate, cfg.actuator.control_rate_hz, "actuator.control_rate_hz",
                "must divide the physics rate");
  const double ticks = cfg.duration_s * rate;
  if (std::fabs(ticks - std::round(ticks)) > 1e-6) {
    throw ConfigError("duration_s", "must be a whole number of physics steps");
  }
  clock.total_ticks = static_cast<std::uint64_t>(std::llround(ticks));
  return clock;
}

SessionConfig rigid_hand(SessionConfig cfg) {
  cfg.physics.k_hand *= 1000.0;
  cfg.physics.c_hand *= 100.0;
  return cfg;
}

int SessionTrace::trigger_count() const {
  return static_cast<int>(std::count_if(sensor_rows.begin(), sensor_rows.end(),
                                        [](const SensorRow& r) { return r.trigger_fired; }));
}

// --- Simulator --------------------------------------------------------------

Simulator::Simulator(SessionConfig cfg, bool record)
    : cfg_(std::move(cfg)),
      clock_(validate(cfg_)),
      record_(record),
      noise_(mix_seed(cfg_.seed, cfg_.light.seed)) {
  magnet_.z = std::max(cfg_.trajectory.at(0.0).z_target, cfg_.physics.z_floor);
  // Behaviour arms only after the calibration movement has taken proximity
  // back below the re-arm level.
  behaviour_.armed = false;
  if (record_) {
    trace_.meta = cfg_;
    const auto n = clock_.total_ticks;
    trace_.physics_rows.reserve(n);
    trace_.sensor_rows.reserve(n / clock_.sensor_div + 1);
    trace_.actuator_rows.reserve(n / clock_.actuator_div + 1);
  }
}

double Simulator::time() const {
  return static_cast<double>(tick_) * cfg_.physics.dt;
}

void Simulator::set_target(double z_target) { target_override_ = z_target; }

void Simulator::clear_target() { target_override_.reset(); }

void Simulator::set_behaviour(const behaviour::BehaviourSpec& spec) {
  behaviour::validate(spec, cfg_.actuator.control_rate_hz);
  cfg_.behaviour = spec;
}

void Simulator::reset_calibration() {
  calibration_ = {};
  prev_proximity_.reset();
  behaviour_.armed = false;
}

SensorRow Simulator::sample_sensor(double t) {
  const double noise = noise_.next(cfg_.light.noise_amp);
  SensorRow row;
  row.t = t;
  if (cfg_.sensor.input == sensing::InputPath::main) {
    const sensing::SensorFrame frame =
        sensing::sample_main(cfg_.light, magnet_.z, t, calibration_, cfg_.sensor, noise);
    row.raw_code = frame.raw_code;
    row.proximity = frame.proximity;
    row.detected = frame.detected;
  } else {
    row.raw_code = sensing::sample_backup(cfg_.light, magnet_.z, t, cfg_.sensor, noise);
    calibration_ = sensing::calibrate_update(calibration_, row.raw_code);
    const sensing::Proximity p = sensing::proximity_of(calibration_, row.raw_code, cfg_.sensor);
    row.proximity = p.value;
    row.detected = p.detected;
  }
  return row;
}

TickEvents Simulator::step() {
  TickEvents events;
  const double t = time();

  if (tick_ % clock_.sensor_div == 0) {
    const double t_frame = static_cast<double>(sensor_index_) / cfg_.sensor.rate_hz;
    SensorRow row = sample_sensor(t_frame);
    if (calibration_.calibrated()) {
      const double p_prev = prev_proximity_.value_or(row.proximity);
      const behaviour::TriggerResult r =
          behaviour::detect_trigger(p_prev, row.proximity, cfg_.behaviour, behaviour_);
      behaviour_ = r.state;
      prev_proximity_ = row.proximity;
      if (r.fired) {
        behaviour_.last_trigger_t = t_frame;
        row.trigger_fired = true;
        events.sound = behaviour::make_event(t_frame, cfg_.behaviour);
        if (record_) trace_.sound_events.push_back(*events.sound);
      }
    }
    ++sensor_index_;
    last_sensor_ = row;
    if (record_) trace_.sensor_rows.push_back(row);
    events.sensor = row;
  }

  if (tick_ % clock_.actuator_div == 0) {
    const double t_frame = static_cast<double>(actuator_index_) / cfg_.actuator.rate_hz;
    const double u = behaviour::behaviour_drive(behaviour_, t_frame, cfg_.behaviour);
    const actuation::ActuatorFrame frame =
        actuation::frame_from_sample(u, actuator_index_, cfg_.actuator);
    held_u_ = frame.u_q;
    ++actuator_index_;
    last_actuator_ = {frame.t, frame.level, frame.u_q, frame.current};
    if (record_) trace_.actuator_rows.push_back(last_actuator_);
    events.actuator = last_actuator_;
  }

  const physics::HandTarget target = target_override_
                                         ? physics::HandTarget{*target_override_, 0.0}
                                         : cfg_.trajectory.at(t);
  if (record_) {
    trace_.physics_rows.push_back(
        {t, magnet_.z, magnet_.v, physics::coil_force(held_u_, magnet_.z, cfg_.physics)});
  }
  magnet_ = physics::step(magnet_, held_u_, target, cfg_.physics);
  ++tick_;
  return events;
}

SessionTrace Simulator::take_trace() {
  SessionTrace out = std::move(trace_);
  trace_ = {};
  trace_.meta = cfg_;
  return out;
}

SessionTrace run_session(const SessionConfig& cfg) {
  Simulator sim(cfg);
  const std::uint64_t n = sim.clock().total_ticks;
  for (std::uint64_t k = 0; k < n; ++k) sim.step();
  return sim.take_trace();
}

// --- Coupling ---------------------------------------------------------------

std::optional<double> coupling_score(const SessionTrace& trace) {
  const auto& sensor = trace.sensor_rows;
  const auto& actuator = trace.actuator_rows;
  const auto first = std::find_if(sensor.begin(), sensor.end(),
                                  [](const SensorRow& r) { return r.trigger_fired; });
  if (first == sensor.end() || actuator.empty()) return std::nullopt;

  const behaviour::BehaviourSpec& spec = trace.meta.behaviour;
  const double sensor_rate = trace.meta.sensor.rate_hz;
  const double actuator_rate = trace.meta.actuator.rate_hz;
  const double t0 = first->t;
  if (sensor.back().t < t0 + 2.0 / spec.f_mod) return std::nullopt;

  const auto begin = static_cast<std::size_t>(first - sensor.begin());
  std::size_t end = begin;
  while (end < sensor.size() && sensor[end].t < t0 + spec.t_decay) ++end;
  const auto max_lag =
      static_cast<std::size_t>(std::floor(kMaxCouplingLagS * sensor_rate + 1e-9));

  // Drive held at each sensor instant, and the proximity first difference.
  std::vector<double> drive(sensor.size(), 0.0);
  std::vector<double> delta(sensor.size(), 0.0);
  for (std::size_t i = 0; i < sensor.size(); ++i) {
    const auto a = static_cast<std::size_t>(
        std::floor(static_cast<double>(i) * actuator_rate / sensor_rate + 1e-9));
    drive[i] = actuator[std::min(a, actuator.size() - 1)].u_q;
    if (i > 0) delta[i] = sensor[i].proximity - sensor[i - 1].proximity;
  }

  double best = 0.0;
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    if (begin + lag >= sensor.size()) break;
    const std::size_t n = std::min(end, sensor.size() - lag) - begin;
    if (n < 2) continue;
    const kernels::Moments m = kernels::moments(
        std::span(drive).subspan(begin, n), std::span(delta).subspan(begin + lag, n));
    const double nn = static_cast<double>(n);
    const double var_x = nn * m.sxx - m.sx * m.sx;
    const double var_y = nn * m.syy - m.sy * m.sy;
    if (var_x <= 1e-12 * nn * m.sxx || var_y <= 1e-12 * nn * m.syy) continue;
    const double r = (nn * m.sxy - m.sx * m.sy) / std::sqrt(var_x * var_y);
    best = std::max(best, std::fabs(r));
  }
  return best;
}

}  // namespace tactile::session
