#pragma once

// On-disk trace: sensor.csv, actuator.csv, physics.csv and meta.json in one
// directory. Numbers use the shortest representation that round-trips, so
// import(export(trace)) == trace bit for bit.

#include <filesystem>

#include "tactile/session.hpp"

namespace tactile::trace_io {

inline constexpr const char* kSensorFile = "sensor.csv";
inline constexpr const char* kActuatorFile = "actuator.csv";
inline constexpr const char* kPhysicsFile = "physics.csv";
inline constexpr const char* kMetaFile = "meta.json";

/// Creates `dir` if needed. Throws IoError naming the failing path.
void export_trace(const session::SessionTrace& trace, const std::filesystem::path& dir);

session::SessionTrace import_trace(const std::filesystem::path& dir);

}  // namespace tactile::trace_io
