#pragma once

#include <stdexcept>
#include <string>

namespace lowtail {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  /// Machine-readable error category, e.g. "parameter".
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& message)
      : Error("parameter", message) {}
};

/// Fewer than k+1 points are available for a k-nearest-neighbor radius.
class InsufficientPointsError : public Error {
 public:
  explicit InsufficientPointsError(const std::string& message)
      : Error("insufficient_points", message) {}
};

/// A score could not be evaluated because its range is not determined by
/// the finite configuration.
class UnstabilizedError : public Error {
 public:
  explicit UnstabilizedError(const std::string& message)
      : Error("unstabilized", message) {}
};

class UnboundedCellError : public Error {
 public:
  explicit UnboundedCellError(const std::string& message)
      : Error("unbounded_cell", message) {}
};

class BracketError : public Error {
 public:
  explicit BracketError(const std::string& message)
      : Error("bracket", message) {}
};

/// A pilot run projected too few hits for a requested sweep.
class InfeasibleSweepError : public Error {
 public:
  explicit InfeasibleSweepError(const std::string& message)
      : Error("infeasible_sweep", message) {}
};

}  // namespace lowtail
