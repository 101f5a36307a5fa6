#pragma once

#include <stdexcept>
#include <string>

namespace dsom {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad ids, wrong vector sizes, invalid weights, broken files.
struct StructuralError : Error {
    using Error::Error;
};

/// No capacity-respecting assignment exists (or could be found) for the request.
struct InfeasibleError : Error {
    using Error::Error;
};

/// Scenario generation exhausted its retry budget.
struct GenerationError : Error {
    using Error::Error;
};

/// A size guard tripped (instance too large for exhaustive search).
struct GuardError : Error {
    using Error::Error;
};

/// The dispatch simulation hit its safety tick cap.
struct SimulationLimitError : Error {
    using Error::Error;
};

} // namespace dsom
