#pragma once

#include <stdexcept>
#include <string>

namespace rsg {

/// Thrown when a numerical solver fails to reach its termination criterion.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an internal consistency check fails (a bug, not bad input).
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace rsg
