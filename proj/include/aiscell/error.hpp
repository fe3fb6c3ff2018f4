#pragma once

#include <stdexcept>
#include <string>

namespace aiscell {

enum class Errc {
  OutOfBounds,
  Undefined,
  MalformedLine,
  MissingLabel,
  DuplicatePort,
  UnknownPort,
  NoModel,
  NoEtaModel,
  NegativeRemaining,
  ZeroSpeed,
  MissingPrediction,
  LengthMismatch,
  PlacementFailure,
  InvalidConfig,
  Io,
  BadSnapshot,
};

const char* errc_name(Errc code) noexcept;

// All library failures surface as this exception; `code()` tells callers
// whether the condition is recoverable (skip the record) or fatal.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace aiscell
