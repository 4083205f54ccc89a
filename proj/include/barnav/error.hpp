#pragma once

#include <stdexcept>
#include <string>

namespace barnav {

enum class ErrorKind {
  PoseOutOfBounds,
  CellOccupied,
  NoPath,
  GenerationExhausted,
  RoiOutOfWindow,
  DegenerateTarget,
  DegenerateLookahead,
  InvalidOptimalTime,
  InvalidPathLength,
  InvalidArgument,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Contract violations and I/O failures. Normal outcomes (a world with no
/// path, an episode that times out) are returned as values instead.
class NavError : public std::runtime_error {
 public:
  NavError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace barnav
