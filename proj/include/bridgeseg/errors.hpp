#pragma once

#include <stdexcept>
#include <string>

namespace bridgeseg {

// Invalid argument values or shape mismatches at an operation boundary.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Corrupt or malformed on-disk data (manifests, rasters, checkpoints).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values where finite values are required.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A training-protocol contract was broken, e.g. target-domain labels
// present in a training split.
class ContractViolation : public std::runtime_error {
 public:
  explicit ContractViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Statistical input without enough variation to compute the requested
// quantity (all-zero differences, constant series, ...).
class DegenerateInputError : public std::runtime_error {
 public:
  explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bridgeseg
