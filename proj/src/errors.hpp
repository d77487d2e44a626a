#pragma once

#include <stdexcept>
#include <string>

namespace hgm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: dimension/parameter validation, incomparable partitions, poles
// of (c)_kappa, malformed plans.
struct InvalidArgument : Error {
    using Error::Error;
};

// Evaluation requested at or too close to the singular set of the Pfaffian
// system (a zero or a tied coordinate).
struct SingularPoint : Error {
    using Error::Error;
};

// Non-finite values during integration, failed brackets, exhausted step
// control.
struct NumericalError : Error {
    using Error::Error;
};

// A route that only exists for certain dimensions was asked for another one.
struct UnsupportedDimension : Error {
    using Error::Error;
};

} // namespace hgm
