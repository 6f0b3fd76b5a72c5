#pragma once

#include <stdexcept>
#include <string>

namespace dsd {

// Base class for all engine errors. The CLI maps subclasses to exit codes:
// ConfigError -> 1, FairnessError -> 3, everything else -> 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor/layer dimension mismatch.
struct ShapeError : Error {
    using Error::Error;
};

// Invalid configuration value (rejected before any training starts).
struct ConfigError : Error {
    using Error::Error;
};

// Dataset contents violate a contract (bad label, empty set, ...).
struct DataError : Error {
    using Error::Error;
};

// API misuse: a documented precondition was broken by the caller.
struct ContractError : Error {
    using Error::Error;
};

// Non-finite value encountered mid-run; aborts the run.
struct NumericError : Error {
    using Error::Error;
};

// Malformed or truncated file (checkpoint, IDX, run directory).
struct FormatError : Error {
    using Error::Error;
};

// Paired experiment arms were configured with unequal epoch budgets.
struct FairnessError : Error {
    using Error::Error;
};

}  // namespace dsd
