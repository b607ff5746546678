#pragma once

#include <stdexcept>
#include <string>

namespace qherald {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (negative time, bad step...).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Two kets could not be combined (overlapping or mismatched spaces).
class CompositionError : public Error
{
public:
    using Error::Error;
};

/// A state has (numerically) zero norm where a physical state is required.
class DegenerateStateError : public Error
{
public:
    using Error::Error;
};

/// Input lies outside the domain of a closed-form expression.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// A two-atom pair carries antisymmetric weight that the qutrit code cannot
/// represent.
class EncodingLeakError : public DomainError
{
public:
    using DomainError::DomainError;
};

/// A fixed-step integrator produced an unphysical result.
class AccuracyError : public Error
{
public:
    using Error::Error;
};

} // namespace qherald
