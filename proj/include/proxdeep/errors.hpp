#pragma once

#include <stdexcept>
#include <string>

namespace proxdeep {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape disagreement between operands.
struct DimError : Error {
    using Error::Error;
};

// Violated precondition or invalid configuration value.
struct ValueError : Error {
    using Error::Error;
};

// Malformed input file (CSV/JSON); message carries the location.
struct ParseError : Error {
    using Error::Error;
};

// Step-size collapse, singularities and similar numeric breakdowns.
struct NumericalError : Error {
    using Error::Error;
};

// Non-finite objective during a fit; message carries the iteration index.
struct DivergenceError : Error {
    using Error::Error;
};

}  // namespace proxdeep
