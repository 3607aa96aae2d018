#pragma once

#include <stdexcept>
#include <string>

namespace idl {

// Base class for all library faults. Invariant *violations* found by the
// validators are returned as data, not thrown; exceptions are reserved for
// contract breaches (bad arguments, missing inputs, I/O failures).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveEigenvalue : Error { using Error::Error; };
struct EmptySpectrum : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct MissingGeometry : Error { using Error::Error; };
struct SlopeOrder : Error { using Error::Error; };
struct OutOfHorizon : Error { using Error::Error; };
struct NonPositiveDelay : Error { using Error::Error; };
struct StabilityGuard : Error { using Error::Error; };
struct HistoryGap : Error { using Error::Error; };
struct MissingEndpointSample : Error { using Error::Error; };
struct BoundOrder : Error { using Error::Error; };
struct NonPositive : Error { using Error::Error; };
struct UnsupportedFamily : Error { using Error::Error; };
struct MissingConstant : Error { using Error::Error; };
struct DegenerateTrial : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace idl
