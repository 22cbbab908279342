#pragma once

#include <stdexcept>
#include <string>

namespace tactile {

/// Invalid configuration. The message always starts with the dotted path of
/// the offending field, e.g. "physics.dt: must be positive".
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// File-system failure while reading or writing traces/configs.
class IoError : public std::runtime_error {
public:
  IoError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

}  // namespace tactile
