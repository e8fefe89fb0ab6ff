#pragma once

#include <stdexcept>
#include <string>

namespace slipflow {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, bad domain, or inconsistent arguments.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Initial data or a state failed a structural check.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A time step or an elliptic solve could not proceed (CFL violation,
/// density positivity loss, iteration budget exhausted).
class SolverAbort : public Error
{
public:
  using Error::Error;
};

class PositivityLoss : public SolverAbort
{
public:
  using SolverAbort::SolverAbort;
};

class CflViolation : public SolverAbort
{
public:
  using SolverAbort::SolverAbort;
};

/// A state invariant (divergence, wall trace) failed after a step.
class InvariantViolation : public SolverAbort
{
public:
  using SolverAbort::SolverAbort;
};

class SolvabilityError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace slipflow
