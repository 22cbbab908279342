#include "tactile/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>

#include "tactile/config.hpp"
#include "tactile/error.hpp"

namespace tactile::trace_io {

namespace fs = std::filesystem;

namespace {

void put(std::string& line, double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  line.append(buf, end);
}

void put(std::string& line, int value) { line += std::to_string(value); }
void put(std::string& line, bool value) { line += value ? '1' : '0'; }

template <typename... Fields>
std::string csv_line(const Fields&... fields) {
  std::string line;
  bool first = true;
  ((line += first ? "" : ",", first = false, put(line, fields)), ...);
  line += '\n';
  return line;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError(path.string(), "write failed");
}

class CsvReader {
public:
  CsvReader(const fs::path& path, std::string expected_header) : path_(path), in_(path) {
    if (!in_) throw IoError(path_.string(), "cannot open for reading");
    std::string header;
    std::getline(in_, header);
    if (header != expected_header) {
      throw IoError(path_.string(), "unexpected header '" + header + "'");
    }
  }

  bool next() {
    if (!std::getline(in_, line_) || line_.empty()) return false;
    ++row_;
    pos_ = 0;
    return true;
  }

  template <typename T>
  T field() {
    const std::size_t end = std::min(line_.find(',', pos_), line_.size());
    T value{};
    const char* first = line_.data() + pos_;
    const char* last = line_.data() + end;
    std::from_chars_result res{};
    if constexpr (std::is_same_v<T, bool>) {
      int raw = 0;
      res = std::from_chars(first, last, raw);
      value = raw != 0;
    } else {
      res = std::from_chars(first, last, value);
    }
    if (res.ec != std::errc{} || res.ptr != last) {
      throw IoError(path_.string(), "malformed field on data row " + std::to_string(row_));
    }
    pos_ = end + 1;
    return value;
  }

private:
  fs::path path_;
  std::ifstream in_;
  std::string line_;
  std::size_t pos_ = 0;
  std::size_t row_ = 0;
};

}  // namespace

void export_trace(const session::SessionTrace& trace, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());

  {
    const fs::path path = dir / kSensorFile;
    auto out = open_out(path);
    out << "t,raw_code,proximity,detected,trigger_fired\n";
    for (const auto& r : trace.sensor_rows) {
      out << csv_line(r.t, r.raw_code, r.proximity, r.detected, r.trigger_fired);
    }
    close_out(out, path);
  }
  {
    const fs::path path = dir / kActuatorFile;
    auto out = open_out(path);
    out << "t,level,u_q,current\n";
    for (const auto& r : trace.actuator_rows) {
      out << csv_line(r.t, r.level, r.u_q, r.current);
    }
    close_out(out, path);
  }
  {
    const fs::path path = dir / kPhysicsFile;
    auto out = open_out(path);
    out << "t,z,v,force\n";
    for (const auto& r : trace.physics_rows) out << csv_line(r.t, r.z, r.v, r.force);
    close_out(out, path);
  }
  {
    const fs::path path = dir / kMetaFile;
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : trace.sound_events) events.push_back(config::to_json(e));
    const nlohmann::json meta = {{"config", config::to_json(trace.meta)},
                                 {"sound_events", events}};
    auto out = open_out(path);
    out << meta.dump(2) << '\n';
    close_out(out, path);
  }
}

session::SessionTrace import_trace(const fs::path& dir) {
  session::SessionTrace trace;
  {
    const fs::path path = dir / kMetaFile;
    const nlohmann::json meta = config::read_json_file(path);
    if (!meta.contains("config") || !meta.contains("sound_events")) {
      throw IoError(path.string(), "missing 'config' or 'sound_events'");
    }
    trace.meta = config::from_json(meta["config"]);
    for (std::size_t i = 0; i < meta["sound_events"].size(); ++i) {
      trace.sound_events.push_back(config::sound_event_from_json(
          meta["sound_events"][i], "sound_events[" + std::to_string(i) + "]"));
    }
  }
  {
    CsvReader csv(dir / kSensorFile, "t,raw_code,proximity,detected,trigger_fired");
    while (csv.next()) {
      session::SensorRow r;
      r.t = csv.field<double>();
      r.raw_code = csv.field<int>();
      r.proximity = csv.field<double>();
      r.detected = csv.field<bool>();
      r.trigger_fired = csv.field<bool>();
      trace.sensor_rows.push_back(r);
    }
  }
  {
    CsvReader csv(dir / kActuatorFile, "t,level,u_q,current");
    while (csv.next()) {
      session::ActuatorRow r;
      r.t = csv.field<double>();
      r.level = csv.field<int>();
      r.u_q = csv.field<double>();
      r.current = csv.field<double>();
      trace.actuator_rows.push_back(r);
    }
  }
  {
    CsvReader csv(dir / kPhysicsFile, "t,z,v,force");
    while (csv.next()) {
      session::PhysicsRow r;
      r.t = csv.field<double>();
      r.z = csv.field<double>();
      r.v = csv.field<double>();
      r.force = csv.field<double>();
      trace.physics_rows.push_back(r);
    }
  }
  return trace;
}

}  // namespace tactile::trace_io
