#pragma once

#include <stdexcept>
#include <string>

namespace nhssh {

/// Evolved Gaussian state collapsed numerically: QR met a (near-)rank-deficient frame.
struct DegenerateStateError : std::runtime_error {
  explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

/// Input matrix violates the requested hermiticity tolerance.
struct NonHermitianError : std::runtime_error {
  explicit NonHermitianError(const std::string& what) : std::runtime_error(what) {}
};

/// Least-squares design matrix is rank deficient (or has too few samples).
struct FitDegenerateError : std::runtime_error {
  explicit FitDegenerateError(const std::string& what) : std::runtime_error(what) {}
};

/// Correlation spectrum left [0,1] beyond tolerance; upstream invariants are broken.
struct SpectrumRangeError : std::runtime_error {
  explicit SpectrumRangeError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad command line, config file, or sweep axis specification.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Output file could not be opened or written.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nhssh
