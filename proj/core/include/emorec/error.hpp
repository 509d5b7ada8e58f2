#pragma once

#include <stdexcept>
#include <string>

namespace emorec {

/// Raised when a rectangle or index falls outside its parent image.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised for invalid parameters (even smoothing windows, zero SE radius, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Per-image pipeline failure. `stage()` names the step that gave up,
/// e.g. "locate_eyes" or "mouth_corners".
class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// I/O and format errors (unreadable images, malformed manifests or configs).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace emorec
