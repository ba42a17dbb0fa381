#pragma once

#include <stdexcept>
#include <string>

namespace juliaspec {

// Thrown when a requested level would exceed the configured memory/time budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigensolver or renormalization solve did not produce a usable answer.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what, long index = -1)
        : std::runtime_error(what), index(index) {}
    long index;
};

// A constructed object failed one of its structural invariants.
struct ConstructionError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace juliaspec
