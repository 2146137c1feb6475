#pragma once

#include <stdexcept>
#include <string>

namespace wbc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct UnknownFrame : Error { using Error::Error; };
struct InvalidDuration : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct NotSufficientlyConstrained : Error { using Error::Error; };
struct DependentConstraints : Error { using Error::Error; };
struct MissingForceMeasurement : Error { using Error::Error; };
struct StaleDecomposition : Error { using Error::Error; };
struct InconsistentDynamics : Error { using Error::Error; };
struct InfeasibleConstraints : Error { using Error::Error; };
struct SimulationDiverged : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace wbc
