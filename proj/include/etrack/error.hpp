#pragma once

#include <stdexcept>
#include <string>

namespace etrack {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by a caller-supplied value (shape mismatch, empty input, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Degenerate or otherwise unusable crop region.
class InvalidRegion : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class TableLoadError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Sequence / image / groundtruth I/O failure.
class LoadError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

/// Tracker failure, tagged with the 0-based frame index where it happened.
class TrackError : public Error {
 public:
  TrackError(std::size_t frame, const std::string& what)
      : Error("frame " + std::to_string(frame) + ": " + what), frame_(frame) {}
  std::size_t frame() const noexcept { return frame_; }

 private:
  std::size_t frame_;
};

}  // namespace etrack
