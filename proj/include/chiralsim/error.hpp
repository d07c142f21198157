#pragma once

#include <stdexcept>

namespace chiralsim {

/// Base for all errors raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A numerical invariant (norm, trace, positivity) drifted past tolerance.
class NumericalError : public Error
{
public:
    using Error::Error;
};

} // namespace chiralsim
