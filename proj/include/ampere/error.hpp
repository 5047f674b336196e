// error.hpp -- error types mapped to process exit codes by the CLI.
#pragma once

#include <stdexcept>
#include <string>

namespace ampere {

// Bad flags / unknown subcommand / malformed config. Exit code 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing or malformed input data. Exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite objective, failed optimization, degenerate statistics. Exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ampere
