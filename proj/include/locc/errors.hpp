#pragma once

#include <stdexcept>
#include <string>

namespace locc {

// Requested object exceeds the configured Hilbert-space cap.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Dimension / shape mismatch between operands.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Input violates an operation precondition (non-Hermitian, bad distribution, ...).
struct ContractError : std::invalid_argument {
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure (non-convergence, loss of positivity beyond tolerance).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// The ledger inequality (or a chained audit bound) failed beyond tolerance.
struct BoundViolationError : NumericError {
    explicit BoundViolationError(const std::string& what) : NumericError(what) {}
};

}  // namespace locc
