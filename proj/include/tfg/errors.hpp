#pragma once

#include <stdexcept>
#include <string>

namespace tfg {

/// Malformed input (CLI exit code 1).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

/// Structurally well-formed input that violates a model invariant
/// (CLI exit code 2).
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace tfg
