#include "tactile/behaviour.hpp"

#include <cmath>
#include <numbers>

#include "kernels/kernels_impl.hpp"
#include "tactile/error.hpp"

namespace tactile::behaviour {

namespace {

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(field, "must be a finite value > 0");
  }
}

}  // namespace

void validate(const BehaviourSpec& spec, double control_rate_hz,
              const std::string& prefix) {
  if (!(spec.p_trig > 0.0 && spec.p_trig < 1.0)) {
    throw ConfigError(prefix + ".p_trig", "must be in (0, 1)");
  }
  if (!(spec.rearm_hyst >= 0.0 && spec.rearm_hyst < spec.p_trig)) {
    throw ConfigError(prefix + ".rearm_hyst", "must be in [0, p_trig)");
  }
  require_positive(spec.t_decay, prefix + ".t_decay");
  require_positive(spec.f_mod, prefix + ".f_mod");
  if (spec.f_mod >= control_rate_hz / 2.0) {
    throw ConfigError(prefix + ".f_mod", "must be below control_rate_hz / 2");
  }
  require_positive(spec.f_sound, prefix + ".f_sound");
  require_positive(spec.tau_sound, prefix + ".tau_sound");
  if (!(spec.amp_sound >= 0.0 && spec.amp_sound <= 1.0)) {
    throw ConfigError(prefix + ".amp_sound", "must be in [0, 1]");
  }
}

TriggerResult detect_trigger(double p_prev, double p_now, const BehaviourSpec& spec,
                             BehaviourState state) {
  TriggerResult result{false, state};
  if (state.armed && p_prev < spec.p_trig && p_now >= spec.p_trig) {
    result.fired = true;
    result.state.armed = false;
    ++result.state.trigger_count;
    return result;
  }
  if (!state.armed && p_now <= spec.p_trig - spec.rearm_hyst) {
    result.state.armed = true;
  }
  return result;
}

double percussive_drive(double dt_trig, const BehaviourSpec& spec) {
  if (!(dt_trig >= 0.0) || dt_trig >= spec.t_decay) return 0.0;
  return kernels::detail::percussive_sample(dt_trig, spec.t_decay, spec.f_mod);
}

double synth_percussive(double dt_trig, const BehaviourSpec& spec) {
  return synth_percussive(dt_trig, make_event(0.0, spec));
}

double synth_percussive(double dt_trig, const SoundEvent& event) {
  if (!(dt_trig >= 0.0)) return 0.0;
  return event.amp_sound * std::exp(-dt_trig / event.tau_sound) *
         std::sin(2.0 * std::numbers::pi * event.f_sound * dt_trig);
}

double behaviour_drive(const BehaviourState& state, double t_now,
                       const BehaviourSpec& spec) {
  if (!state.last_trigger_t) return 0.0;
  return percussive_drive(t_now - *state.last_trigger_t, spec);
}

SoundEvent make_event(double t, const BehaviourSpec& spec) {
  return {t, spec.f_sound, spec.tau_sound, spec.amp_sound};
}

std::vector<float> render_sound(const SoundEvent& event, double duration_s,
                                double sample_rate) {
  const auto n = static_cast<std::size_t>(std::max(0.0, duration_s) * sample_rate);
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(synth_percussive(static_cast<double>(i) / sample_rate, event));
  }
  return out;
}

}  // namespace tactile::behaviour
