#pragma once

#include <stdexcept>
#include <string>

namespace mproj {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedTwist : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidProbe : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct HypothesisViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Unsupported : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad modulus or other run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed scheme input. `field` names the offending JSON path.
struct FormatError : std::invalid_argument {
  FormatError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace mproj
