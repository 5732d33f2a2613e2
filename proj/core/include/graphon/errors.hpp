#pragma once

#include <stdexcept>
#include <string>

namespace graphon {

/// Input fails a structural invariant (bad weights, overlapping subsets, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Request cannot be served (size over an exact-mode limit, N < n, ...).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical blow-up (NaN loss during search training).
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace graphon
