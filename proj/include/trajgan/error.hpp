#pragma once

#include <stdexcept>
#include <string>

namespace trajgan {

// Error taxonomy shared across the library. The CLI maps these onto its
// exit-code contract: config -> 1, data -> 2, numeric -> 3.
struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite value produced by a forward op; message carries the op name.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files: scene CSVs, map JSON, checkpoints, corpora.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid experiment configuration (unknown keys, impossible settings).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse (non-scalar loss, consumed tape, missing gradients).
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace trajgan
