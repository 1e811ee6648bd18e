#pragma once

#include <stdexcept>
#include <string>

namespace qso {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// simplex construction / queries
struct EmptyVectorError : Error { using Error::Error; };
struct NegativeCoordinateError : Error { using Error::Error; };
struct BadSumError : Error { using Error::Error; };
struct IndexOutOfRangeError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct EmptyFaceError : Error { using Error::Error; };

// operator representations
struct ValidationError : Error { using Error::Error; };
struct NotVolterraError : Error { using Error::Error; };
struct SamplingBudgetExceededError : Error { using Error::Error; };

// tournament extraction
struct ZeroOffDiagonalError : Error { using Error::Error; };

// fixed-point analysis
struct DegenerateFaceError : Error { using Error::Error; };
struct FaceBudgetExceededError : Error { using Error::Error; };
struct UnsupportedDimensionError : Error { using Error::Error; };
struct UnsupportedPeriodError : Error { using Error::Error; };

// dynamics
struct InvalidBudgetError : Error { using Error::Error; };
struct SupportMismatchError : Error { using Error::Error; };
struct NotTransversalError : Error { using Error::Error; };

// generic argument validation (grid steps, budgets of plumbing helpers)
struct InvalidArgumentError : Error { using Error::Error; };

} // namespace qso
