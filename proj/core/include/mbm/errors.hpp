#pragma once

#include <stdexcept>
#include <string>

namespace mbm {

// Invalid argument or broken input invariant (bad k, dimension mismatch, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite value produced while computing (aborts the computation).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file content (JSON/CSV that does not match a schema).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure (missing file, unwritable path).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mbm
