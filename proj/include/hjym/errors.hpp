#pragma once

#include <stdexcept>
#include <string>

namespace hjym {

// Group element sits on (or too close to) the cut of the principal log.
struct BranchCutError : std::runtime_error {
  explicit BranchCutError(const std::string& what) : std::runtime_error(what) {}
};

// Site or link index crosses the open time boundary.
struct BoundaryError : std::out_of_range {
  explicit BoundaryError(const std::string& what) : std::out_of_range(what) {}
};

// File format problems, one kind per failure mode.
struct IoError : std::runtime_error {
  enum class Kind { Magic, Version, Truncated, Checksum, Open };
  IoError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

// Requested diagnostic cannot be formed from the available data.
struct DiagnosticUnavailable : std::runtime_error {
  explicit DiagnosticUnavailable(const std::string& what) : std::runtime_error(what) {}
};

// Iterative procedure hit its sweep/iteration cap.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hjym
