#pragma once

#include <stdexcept>
#include <string>

namespace quasichaos {

// Invalid physical or numerical parameters (exit code 2 at the CLI).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical accuracy guard tripped: propagator not converged, Fourier
// aliasing, coherent-state tail truncated, ... (exit code 3 at the CLI).
// Guards abort the computation rather than degrade it.
class AccuracyError : public std::runtime_error {
 public:
  explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidParameter : public ConfigError {
 public:
  explicit InvalidParameter(const std::string& msg) : ConfigError(msg) {}
};

}  // namespace quasichaos
