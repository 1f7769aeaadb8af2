#pragma once

#include <stdexcept>
#include <string>

namespace swash {

/// Base class for every error the library raises on purpose.
/// Catching swash::Error at the CLI boundary is sufficient to turn any
/// library failure into a diagnostic message and a nonzero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euler-rate transform requested too close to the |theta| = pi/2 singularity.
class GimbalLock : public Error {
 public:
  using Error::Error;
};

/// An argument violated a documented range (e.g. |ell| beyond the travel limit).
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Inertia tensor not invertible at the requested state.
class SingularInertia : public Error {
 public:
  using Error::Error;
};

/// Rotor-speed allocation infeasible (yaw demand exceeds thrust budget).
class InfeasibleAllocation : public Error {
 public:
  using Error::Error;
};

/// Controller asked to divide by a vanishing attitude cosine.
class NearSingularAttitude : public Error {
 public:
  using Error::Error;
};

/// Controller step requires strictly positive thrust but got none.
class ZeroThrust : public Error {
 public:
  using Error::Error;
};

/// Closed-loop state left the trust region (norm blow-up or non-finite values).
class Diverged : public Error {
 public:
  using Error::Error;
};

/// A user-supplied table (sampled trajectory, config) is structurally invalid.
class MalformedTable : public Error {
 public:
  using Error::Error;
};

/// A log/metric operation was asked for on an empty record.
class EmptyLog : public Error {
 public:
  using Error::Error;
};

/// Configuration file is syntactically or semantically invalid.  Carries
/// enough context (file, line, field) for the CLI to print a usable message.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace swash
