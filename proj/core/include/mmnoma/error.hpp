#pragma once

#include <stdexcept>
#include <string>

namespace mmnoma {

// Bad inputs (out-of-range directions, malformed groups, ...) are reported
// with std::invalid_argument. The types below mark conditions callers are
// expected to handle differently.

// A scenario that violates a physical budget, e.g. beam gains whose
// gain-width product exceeds the array's total.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Numerically degenerate inputs, e.g. a rank-deficient channel matrix
// handed to zero-forcing.
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mmnoma
