#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlvol {

/// Invalid run configuration, detected before any computation starts.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure inside a computation.
struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The LP solver could not certify a result.
struct SolverError : ComputationError {
    using ComputationError::ComputationError;
};

/// Malformed input file; carries the 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line_number)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    std::size_t line;
};

}  // namespace nlvol
