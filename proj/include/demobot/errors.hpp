#pragma once

#include <stdexcept>
#include <string>

namespace demobot {

// Bad input files, missing frames, malformed configs.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Caller broke an API precondition (dimension mismatch, non-finite input).
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Unrecoverable failure mid-training (non-finite loss or network output).
struct TrainingAbort : std::runtime_error {
  explicit TrainingAbort(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace demobot
