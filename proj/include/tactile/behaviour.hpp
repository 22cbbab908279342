#pragma once

// Percussive behaviour: crossing a proximity threshold triggers a low
// decaying tone and a rejection burst modulated by a decaying triangle wave.

#include <optional>
#include <string>
#include <vector>

namespace tactile::behaviour {

struct BehaviourSpec {
  double p_trig = 0.8;
  double rearm_hyst = 0.1;
  double t_decay = 0.8;     // s, drive envelope length
  double f_mod = 30.0;      // Hz, triangle modulation
  double f_sound = 80.0;    // Hz
  double tau_sound = 0.25;  // s
  double amp_sound = 0.9;

  friend bool operator==(const BehaviourSpec&, const BehaviourSpec&) = default;
};

struct BehaviourState {
  bool armed = true;
  std::optional<double> last_trigger_t;
  int trigger_count = 0;
};

struct SoundEvent {
  double t = 0.0;
  double f_sound = 0.0;
  double tau_sound = 0.0;
  double amp_sound = 0.0;

  friend bool operator==(const SoundEvent&, const SoundEvent&) = default;
};

struct TriggerResult {
  bool fired = false;
  BehaviourState state;
};

inline constexpr double kSoundSampleRate = 44100.0;

/// `control_rate_hz` bounds f_mod (Nyquist of the drive signal).
void validate(const BehaviourSpec& spec, double control_rate_hz,
              const std::string& prefix = "behaviour");

/// Rising edge through p_trig while armed fires and disarms. Re-arms once
/// proximity falls to p_trig - rearm_hyst or below.
/// The caller records the trigger time on the returned state.
TriggerResult detect_trigger(double p_prev, double p_now, const BehaviourSpec& spec,
                             BehaviourState state);

/// env(dt) * tri(dt): linear envelope from 1 to 0 over t_decay, triangle at
/// f_mod starting at +1. Zero before the trigger and after t_decay.
double percussive_drive(double dt_trig, const BehaviourSpec& spec);

/// amp * exp(-dt/tau) * sin(2*pi*f*dt).
double synth_percussive(double dt_trig, const BehaviourSpec& spec);
double synth_percussive(double dt_trig, const SoundEvent& event);

/// The audio-rate drive fed to the actuator: percussive_drive while a
/// trigger is active, exactly 0 otherwise.
double behaviour_drive(const BehaviourState& state, double t_now,
                       const BehaviourSpec& spec);

SoundEvent make_event(double t, const BehaviourSpec& spec);

/// Mono render of one event at `sample_rate`, `duration_s` long.
std::vector<float> render_sound(const SoundEvent& event, double duration_s,
                                double sample_rate = kSoundSampleRate);

}  // namespace tactile::behaviour
