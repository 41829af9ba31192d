#pragma once

#include <stdexcept>
#include <string>

namespace armwind {

enum class ErrorKind {
  InvalidParameter,
  DegenerateDomain,
  DegenerateGeometry,
  UnsupportedSequence,
  InstanceTooLarge,
  BudgetExceeded,
  IntegrationFailure,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Rejection sampling ran out of attempts.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, long long attempts)
      : Error(ErrorKind::BudgetExceeded, what + " after " + std::to_string(attempts) + " attempts"),
        attempts_(attempts) {}
  long long attempts() const noexcept { return attempts_; }

 private:
  long long attempts_;
};

/// SDE step size collapsed.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double time)
      : Error(ErrorKind::IntegrationFailure, what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace armwind
