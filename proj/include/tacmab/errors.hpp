#pragma once

#include <stdexcept>
#include <string>

namespace tacmab {

// Malformed arguments passed to a library operation (wrong lengths, budget
// exceeded, out-of-range probabilities).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration value failed validation. `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A runtime invariant of a protocol was violated (plan divergence after a
// sync, structural sync bound exceeded, missing peer message).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace tacmab
