#include "tactile/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "tactile/error.hpp"

namespace tactile::config {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Walks one JSON object, reading known fields and rejecting the rest.
class ObjectReader {
public:
  ObjectReader(const json& doc, std::string prefix) : doc_(doc), prefix_(std::move(prefix)) {
    if (!doc_.is_object()) {
      throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    }
  }

  // Call once all known fields have been read.
  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.contains(key)) throw ConfigError(join(prefix_, key), "unknown field");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(path(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        if (v->is_number_unsigned()) {
          out = v->get<Int>();
        } else {
          const auto s = v->get<std::int64_t>();
          if (s < 0) throw ConfigError(path(key), "must be >= 0");
          out = static_cast<Int>(s);
        }
      } else {
        out = v->get<Int>();
      }
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  std::string path(const std::string& key) const { return join(prefix_, key); }

private:
  const json& doc_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void read(const json& doc, const std::string& prefix, physics::PhysicsConfig& c) {
  ObjectReader r(doc, prefix);
  r.number("f_ref", c.f_ref);
  r.number("z0", c.z0);
  r.number("m", c.m);
  r.number("k_hand", c.k_hand);
  r.number("c_hand", c.c_hand);
  r.number("i_max", c.i_max);
  r.number("z_floor", c.z_floor);
  r.number("dt", c.dt);
  r.finish();
}

void read(const json& doc, const std::string& prefix, sensing::LightModel& c) {
  ObjectReader r(doc, prefix);
  r.number("ambient", c.ambient);
  r.number("floor_frac", c.floor_frac);
  r.number("flicker_amp", c.flicker_amp);
  r.number("flicker_hz", c.flicker_hz);
  r.number("flicker_phase", c.flicker_phase);
  r.number("noise_amp", c.noise_amp);
  r.integer("seed", c.seed);
  r.finish();
}

void read(const json& doc, const std::string& prefix, sensing::SensorConfig& c) {
  ObjectReader r(doc, prefix);
  r.integer("bits", c.bits);
  r.number("rate_hz", c.rate_hz);
  r.number("threshold", c.threshold);
  r.number("z_max", c.z_max);
  r.number("backup_window_s", c.backup_window_s);
  std::string input = c.input == sensing::InputPath::main ? "main" : "backup";
  r.string("input", input);
  if (input == "main") {
    c.input = sensing::InputPath::main;
  } else if (input == "backup") {
    c.input = sensing::InputPath::backup;
  } else {
    throw ConfigError(r.path("input"), "expected \"main\" or \"backup\"");
  }
  r.finish();
}

void read(const json& doc, const std::string& prefix, actuation::ActuatorConfig& c) {
  ObjectReader r(doc, prefix);
  r.integer("levels", c.levels);
  r.number("rate_hz", c.rate_hz);
  r.number("control_rate_hz", c.control_rate_hz);
  r.number("i_max", c.i_max);
  r.finish();
}

void read(const json& doc, const std::string& prefix, behaviour::BehaviourSpec& c) {
  ObjectReader r(doc, prefix);
  r.number("p_trig", c.p_trig);
  r.number("rearm_hyst", c.rearm_hyst);
  r.number("t_decay", c.t_decay);
  r.number("f_mod", c.f_mod);
  r.number("f_sound", c.f_sound);
  r.number("tau_sound", c.tau_sound);
  r.number("amp_sound", c.amp_sound);
  r.finish();
}

session::Trajectory read_trajectory(const json& doc, const std::string& prefix) {
  if (doc.is_string()) return session::Trajectory::from_preset(doc.get<std::string>());
  ObjectReader r(doc, prefix);
  std::string preset;
  r.string("preset", preset);
  const json* frames = r.find("keyframes");
  r.finish();
  if (!preset.empty()) {
    // Keyframes in an echoed config are informational; the preset wins.
    return session::Trajectory::from_preset(preset);
  }
  session::Trajectory tr;
  if (frames == nullptr) throw ConfigError(r.path("keyframes"), "missing (or give a preset)");
  if (!frames->is_array()) throw ConfigError(r.path("keyframes"), "expected an array");
  for (std::size_t i = 0; i < frames->size(); ++i) {
    const json& k = (*frames)[i];
    const std::string field = r.path("keyframes") + "[" + std::to_string(i) + "]";
    if (k.is_array() && k.size() == 2 && k[0].is_number() && k[1].is_number()) {
      tr.keyframes.push_back({k[0].get<double>(), k[1].get<double>()});
    } else if (k.is_object()) {
      session::Keyframe kf;
      ObjectReader kr(k, field);
      kr.number("t", kf.t);
      kr.number("z", kf.z);
      kr.finish();
      tr.keyframes.push_back(kf);
    } else {
      throw ConfigError(field, "expected [t, z] or {\"t\":..., \"z\":...}");
    }
  }
  return tr;
}

}  // namespace

json to_json(const behaviour::BehaviourSpec& s) {
  return {{"p_trig", s.p_trig},   {"rearm_hyst", s.rearm_hyst}, {"t_decay", s.t_decay},
          {"f_mod", s.f_mod},     {"f_sound", s.f_sound},       {"tau_sound", s.tau_sound},
          {"amp_sound", s.amp_sound}};
}

json to_json(const behaviour::SoundEvent& e) {
  return {{"t", e.t}, {"f_sound", e.f_sound}, {"tau_sound", e.tau_sound},
          {"amp_sound", e.amp_sound}};
}

json to_json(const session::SessionConfig& cfg) {
  const auto& p = cfg.physics;
  const auto& l = cfg.light;
  const auto& s = cfg.sensor;
  const auto& a = cfg.actuator;
  json keyframes = json::array();
  for (const auto& k : cfg.trajectory.keyframes) keyframes.push_back({k.t, k.z});
  json trajectory = {{"keyframes", keyframes}};
  if (!cfg.trajectory.preset.empty()) trajectory["preset"] = cfg.trajectory.preset;
  return {
      {"duration_s", cfg.duration_s},
      {"seed", cfg.seed},
      {"physics",
       {{"f_ref", p.f_ref}, {"z0", p.z0}, {"m", p.m}, {"k_hand", p.k_hand},
        {"c_hand", p.c_hand}, {"i_max", p.i_max}, {"z_floor", p.z_floor}, {"dt", p.dt}}},
      {"light",
       {{"ambient", l.ambient}, {"floor_frac", l.floor_frac},
        {"flicker_amp", l.flicker_amp}, {"flicker_hz", l.flicker_hz},
        {"flicker_phase", l.flicker_phase}, {"noise_amp", l.noise_amp}, {"seed", l.seed}}},
      {"sensor",
       {{"bits", s.bits}, {"rate_hz", s.rate_hz}, {"threshold", s.threshold},
        {"z_max", s.z_max}, {"backup_window_s", s.backup_window_s},
        {"input", s.input == sensing::InputPath::main ? "main" : "backup"}}},
      {"actuator",
       {{"levels", a.levels}, {"rate_hz", a.rate_hz},
        {"control_rate_hz", a.control_rate_hz}, {"i_max", a.i_max}}},
      {"behaviour", to_json(cfg.behaviour)},
      {"trajectory", trajectory},
  };
}

session::SessionConfig from_json(const json& doc) {
  session::SessionConfig cfg;
  ObjectReader r(doc, "");
  r.number("duration_s", cfg.duration_s);
  r.integer("seed", cfg.seed);
  if (const json* v = r.find("physics")) read(*v, "physics", cfg.physics);
  if (const json* v = r.find("light")) read(*v, "light", cfg.light);
  if (const json* v = r.find("sensor")) read(*v, "sensor", cfg.sensor);
  if (const json* v = r.find("actuator")) read(*v, "actuator", cfg.actuator);
  if (const json* v = r.find("behaviour")) read(*v, "behaviour", cfg.behaviour);
  if (const json* v = r.find("trajectory")) cfg.trajectory = read_trajectory(*v, "trajectory");
  r.finish();
  return cfg;
}

behaviour::BehaviourSpec behaviour_from_json(const json& doc, const std::string& prefix) {
  behaviour::BehaviourSpec spec;
  read(doc, prefix, spec);
  return spec;
}

behaviour::SoundEvent sound_event_from_json(const json& doc, const std::string& prefix) {
  behaviour::SoundEvent e;
  ObjectReader r(doc, prefix);
  r.number("t", e.t);
  r.number("f_sound", e.f_sound);
  r.number("tau_sound", e.tau_sound);
  r.number("amp_sound", e.amp_sound);
  r.finish();
  return e;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", path.string() + ": malformed JSON: " + e.what());
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(std::string{assignment}, "override must look like key=value");
  }
  const std::string key{assignment.substr(0, eq)};
  const std::string text{assignment.substr(eq + 1)};
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->is_object()) throw ConfigError(key, "path crosses a non-object");
    node = &(*node)[path[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw ConfigError(key, "path crosses a non-object");
  (*node)[path.back()] = std::move(value);
}

session::SessionConfig load(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides) {
  json doc = read_json_file(path);
  for (const auto& o : overrides) apply_override(doc, o);
  session::SessionConfig cfg = from_json(doc);
  session::validate(cfg);
  return cfg;
}

}  // namespace tactile::config
