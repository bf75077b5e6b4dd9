#pragma once

#include <stdexcept>
#include <string>

namespace twolayer {

/// Failure modes a Riemann solve or time step can surface to the caller.
enum class SolverErrorKind {
  HyperbolicityLoss,
  NearSingularBasis,
  NegativeDepth,
  DegenerateTopLayer,
};

inline const char* to_string(SolverErrorKind kind) {
  switch (kind) {
    case SolverErrorKind::HyperbolicityLoss: return "HyperbolicityLoss";
    case SolverErrorKind::NearSingularBasis: return "NearSingularBasis";
    case SolverErrorKind::NegativeDepth: return "NegativeDepth";
    case SolverErrorKind::DegenerateTopLayer: return "DegenerateTopLayer";
  }
  return "Unknown";
}

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  SolverErrorKind kind() const noexcept { return kind_; }

 private:
  SolverErrorKind kind_;
};

/// Raised for invalid parameters, configs and scenario names.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace twolayer
