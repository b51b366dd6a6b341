#pragma once

#include <stdexcept>
#include <string>

namespace logcon {

// Input outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured enumeration/size budget was exceeded.  Carries enough context
// to report why the computation was refused rather than attempted.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical integration failed (step underflow / blow-up detection).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace logcon
