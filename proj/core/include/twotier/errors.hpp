#pragma once

#include <stdexcept>
#include <string>

namespace twotier {

/// Argument outside the mathematical domain of an operation (negative
/// distance, probability outside [0,1], ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A closed form was requested for a path-loss exponent it does not cover.
struct UnsupportedExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Adaptive integration failed to reach the requested tolerance.
struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An estimator was handed fewer samples than it needs to be meaningful.
struct InsufficientSamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Tabulated data (moment grids, contour grids) do not line up.
struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Feasibility was expected to be monotone in the search variable but the
/// evaluated values contradict that.
struct NonMonotoneOutage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A simulation scenario whose conditioning event has probability zero.
struct DegenerateScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twotier
