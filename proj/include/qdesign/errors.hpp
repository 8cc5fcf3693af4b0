#pragma once

#include <stdexcept>
#include <string>

namespace qdesign {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field construction
struct NotPrimePower : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// Linear algebra / subspace lattice
struct DimensionMismatch : Error { using Error::Error; };
struct AmbientMismatch : Error { using Error::Error; };
struct NotContained : Error { using Error::Error; };
struct BadDim : Error { using Error::Error; };

// Parameter arithmetic
struct InvalidParameterSet : Error { using Error::Error; };
struct SOutOfRange : Error { using Error::Error; };
struct TZero : Error { using Error::Error; };
struct NonIntegralMu : Error { using Error::Error; };
struct NonIntegralDual : Error { using Error::Error; };
struct NonIntegralLambda : Error { using Error::Error; };

// Design constructions
struct ParamMismatch : Error { using Error::Error; };
struct InconsistentCounts : Error { using Error::Error; };

// Large sets
struct NMismatch : Error { using Error::Error; };

// Search
struct NoPrimitivePolyTable : Error { using Error::Error; };

// File formats
struct FormatError : Error { using Error::Error; };

/// Violation of an internal invariant; indicates a bug, not bad input.
struct InternalError : Error { using Error::Error; };

} // namespace qdesign
