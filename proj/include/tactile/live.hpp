#pragma once

// Live session: the simulator driven by control messages, producing the
// stream messages a viewer consumes. Network-agnostic; `server.hpp` wires it
// to a WebSocket.
//
// Wire format (both directions): {"kind": "...", "t": seconds, "payload": {...}}
//   stream:  state | sound | config_ack | error
//   control: set_target {z_target} | load_behaviour {BehaviourSpec} | start |
//            stop | reset_calibration

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tactile/session.hpp"

namespace tactile::app {

inline constexpr double kStreamRateHz = 60.0;
inline constexpr double kMaxTargetZ = 0.12;

struct StreamMessage {
  std::string kind;
  double t = 0.0;
  nlohmann::json payload;

  nlohmann::json to_json() const;
  std::string dump() const { return to_json().dump(); }
};

StreamMessage error_message(double t, std::string code, std::string message);

class LiveSession {
public:
  /// Starts paused, holding the hand at the trajectory's first target.
  explicit LiveSession(session::SessionConfig cfg);

  /// Parses and applies one control message. Returns the direct replies
  /// (config_ack or error); never throws on bad input.
  std::vector<StreamMessage> handle_control(std::string_view text);

  /// Steps `ticks` physics ticks when running. Returns state messages
  /// decimated to kStreamRateHz plus every sound event.
  std::vector<StreamMessage> advance(std::uint64_t ticks);

  void start() { running_ = true; }
  void pause() { running_ = false; }
  bool running() const { return running_; }

  double time() const { return sim_.time(); }
  std::uint64_t tick() const { return sim_.tick(); }
  int trigger_count() const { return sim_.behaviour_state().trigger_count; }
  const session::Simulator& simulator() const { return sim_; }
  /// Active config, including any loaded behaviour.
  nlohmann::json config_json() const;

private:
  StreamMessage state_message() const;

  session::Simulator sim_;
  bool running_ = false;
  double last_t_ = 0.0;  // stream time never goes backwards
};

}  // namespace tactile::app
