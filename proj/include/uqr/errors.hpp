#pragma once

#include <stdexcept>
#include <string>

namespace uqr {

/// Malformed input: mismatched topologies, bad grid parameters, an operator
/// applied to the wrong kind of grid, matrix size mismatch, and the like.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested an operation that needs a nonzero state (e.g. normalizing 0).
class DegenerateStateError : public std::runtime_error {
public:
    explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

/// Statistics were requested for a state that is not unit-normalized.
class NotNormalizedError : public std::runtime_error {
public:
    explicit NotNormalizedError(const std::string& what) : std::runtime_error(what) {}
};

/// Text input (CLI state spec, expression, CSV, config) failed to parse.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense-matrix oracle asked to materialize beyond its size cap.
class CapExceededError : public std::runtime_error {
public:
    explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uqr
