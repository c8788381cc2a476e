#pragma once

#include <stdexcept>
#include <string>

namespace tumatch {

// Error taxonomy shared by the library and the CLI. The CLI maps these to
// stable process exit codes (see tools/).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: shape mismatches, invalid probability vectors, unknown labels.
struct InvalidArgument : Error {
    using Error::Error;
};

// Config / data file problems (exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// Iterative procedure ran out of budget or produced non-finite values
// (exit code 3).
struct ConvergenceError : Error {
    using Error::Error;
};

// Identification failures: boundary covariations, zero mutual information,
// rank-deficient bases (exit code 4).
struct IdentificationError : Error {
    using Error::Error;
};

} // namespace tumatch
