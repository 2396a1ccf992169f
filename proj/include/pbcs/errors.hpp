#pragma once

#include <stdexcept>

namespace pbcs {

// Error taxonomy shared by the library and the CLI exit-code mapping.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or length mismatch between operands.
struct DimensionError : Error { using Error::Error; };

// Index outside the valid range.
struct RangeError : Error { using Error::Error; };

// Invalid configuration, e.g. M >= N_C*N_B.
struct ConfigError : Error { using Error::Error; };

// Non-finite samples where finite values are required.
struct DataError : Error { using Error::Error; };

// Malformed or inconsistent file contents.
struct FormatError : Error { using Error::Error; };

// Filesystem-level read/write failure.
struct IoError : Error { using Error::Error; };

// Solver failed on every row; no usable estimate.
struct ConvergenceError : Error { using Error::Error; };

}  // namespace pbcs
