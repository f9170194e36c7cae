#pragma once

#include <stdexcept>
#include <string>

namespace hpdet {

// Error taxonomy shared by every module. Each condition gets its own type so
// callers (and the CLI exit-code mapping) can discriminate without string
// matching.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A parameter walked onto (or within tolerance of) a pole of a Gamma factor
// or a hypergeometric denominator.
struct PolePassed : Error { using Error::Error; };

// A series failed to meet its tail bound within the hard term cap.
struct NoConvergence : Error { using Error::Error; };

// Argument outside the certified evaluation region.
struct DomainError : Error { using Error::Error; };

// An object (orthogonal polynomial, norm) does not exist for the requested
// degree at these parameters.
struct NotDefined : Error { using Error::Error; };

// A quantity that must be real came back with an imaginary residue above
// tolerance; signals a conditioning or implementation fault upstream.
struct ImaginaryLeak : Error { using Error::Error; };

// Log-scale value below (or above) the representable double range.
struct Underflow : Error { using Error::Error; };

// A correlation determinant fell below the negative tolerance.
struct NegativeDeterminant : Error { using Error::Error; };

// Dense eigensolver failed its backward-error contract.
struct EigenFailure : Error { using Error::Error; };

struct NotSorted : Error { using Error::Error; };

// Matrix argument not in the open right halfplane A + A* > 0.
struct NotInHalfplane : Error { using Error::Error; };

// Stored alpha entries cannot meet the requested tail bound.
struct TruncationInsufficient : Error { using Error::Error; };

// Spectrum has ties where distinct eigenvalues are required.
struct DegenerateSpectrum : Error { using Error::Error; };

// Fredholm determinant came out nonpositive.
struct NonPositive : Error { using Error::Error; };

// CLI configuration violates an invariant.
struct UsageError : Error { using Error::Error; };

}  // namespace hpdet
