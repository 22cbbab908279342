#include "tactile/live.hpp"

#include <algorithm>

#include "tactile/config.hpp"
#include "tactile/error.hpp"

namespace tactile::app {

using nlohmann::json;

json StreamMessage::to_json() const {
  return {{"kind", kind}, {"t", t}, {"payload", payload.is_null() ? json::object() : payload}};
}

StreamMessage error_message(double t, std::string code, std::string message) {
  return {"error", t, {{"code", std::move(code)}, {"message", std::move(message)}}};
}

LiveSession::LiveSession(session::SessionConfig cfg) : sim_(std::move(cfg), /*record=*/false) {
  sim_.set_target(sim_.config().trajectory.at(0.0).z_target);
}

json LiveSession::config_json() const { return config::to_json(sim_.config()); }

std::vector<StreamMessage> LiveSession::handle_control(std::string_view text) {
  const double t = sim_.time();
  const json msg = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (msg.is_discarded()) return {error_message(t, "malformed", "control message is not valid JSON")};
  if (!msg.is_object() || !msg.contains("kind") || !msg["kind"].is_string()) {
    return {error_message(t, "malformed", "control message needs a string 'kind'")};
  }
  const std::string kind = msg["kind"].get<std::string>();
  const json payload = msg.value("payload", json::object());
  if (!payload.is_object()) return {error_message(t, "malformed", "'payload' must be an object")};

  if (kind == "set_target") {
    const auto it = payload.find("z_target");
    if (it == payload.end() || !it->is_number()) {
      return {error_message(t, "invalid_field", "payload.z_target: expected a number")};
    }
    sim_.set_target(std::clamp(it->get<double>(), 0.0, kMaxTargetZ));
    return {};
  }
  if (kind == "load_behaviour") {
    try {
      sim_.set_behaviour(config::behaviour_from_json(payload, "payload"));
    } catch (const ConfigError& e) {
      return {error_message(t, "invalid_field", e.what())};
    }
    return {{"config_ack", t, {{"applied", kind}, {"behaviour", config::to_json(sim_.config().behaviour)}}}};
  }
  if (kind == "start") {
    start();
  } else if (kind == "stop") {
    pause();
  } else if (kind == "reset_calibration") {
    sim_.reset_calibration();
  } else {
    return {error_message(t, "unknown_kind", "unknown control kind '" + kind + "'")};
  }
  return {{"config_ack", t, {{"applied", kind}}}};
}

StreamMessage LiveSession::state_message() const {
  const auto& s = sim_.last_sensor();
  const auto& a = sim_.last_actuator();
  return {"state",
          sim_.time(),
          {{"z", sim_.magnet().z},
           {"proximity", s.proximity},
           {"raw_code", s.raw_code},
           {"level", a.level},
           {"u_q", a.u_q},
           {"current", a.current},
           {"detected", s.detected},
           {"armed", sim_.behaviour_state().armed}}};
}

std::vector<StreamMessage> LiveSession::advance(std::uint64_t ticks) {
  std::vector<StreamMessage> out;
  if (!running_) return out;
  const std::uint64_t rate = sim_.clock().physics_rate;
  const auto stream_rate = static_cast<std::uint64_t>(kStreamRateHz);
  for (std::uint64_t i = 0; i < ticks; ++i) {
    const std::uint64_t k = sim_.tick();
    const session::TickEvents ev = sim_.step();
    if (ev.sound) {
      last_t_ = std::max(last_t_, ev.sound->t);
      out.push_back({"sound", last_t_, config::to_json(*ev.sound)});
    }
    // Emit when the 60 Hz frame index advances (always on the first tick).
    if (k == 0 || (k * stream_rate) / rate != ((k - 1) * stream_rate) / rate) {
      out.push_back(state_message());
      last_t_ = std::max(last_t_, out.back().t);
      out.back().t = last_t_;
    }
  }
  return out;
}

}  // namespace tactile::app
