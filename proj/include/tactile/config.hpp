#pragma once

// Session config document (JSON). Field names mirror the C++ structs.
// Unknown fields and wrong types are rejected with the dotted field path.

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "tactile/session.hpp"

namespace tactile::config {

nlohmann::json to_json(const session::SessionConfig& cfg);
nlohmann::json to_json(const behaviour::BehaviourSpec& spec);
nlohmann::json to_json(const behaviour::SoundEvent& event);

/// Missing fields keep their defaults.
session::SessionConfig from_json(const nlohmann::json& doc);
behaviour::BehaviourSpec behaviour_from_json(const nlohmann::json& doc,
                                             const std::string& prefix = "behaviour");
behaviour::SoundEvent sound_event_from_json(const nlohmann::json& doc,
                                            const std::string& prefix);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Applies "dotted.path=VALUE". VALUE is parsed as JSON when it parses,
/// otherwise taken as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Reads, applies overrides, parses and validates.
session::SessionConfig load(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides = {});

}  // namespace tactile::config
