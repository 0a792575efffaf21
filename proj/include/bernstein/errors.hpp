#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bernstein {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A complex eigenvalue lacks its conjugate partner (or the multiplicities
/// of a conjugate pair differ), so no real-form basis exists.
class ConjugationViolation : public Error {
public:
    using Error::Error;
};

/// A denominator magnitude fell below the configured floor.
class DivisionByZero : public Error {
public:
    using Error::Error;
};

/// The endpoint collocation conditions fail to single out one function per
/// index: the space is not Chebyshev for this endpoint pair.
class NotChebyshevAtEndpoints : public Error {
public:
    using Error::Error;
};

/// Both expansion strategies (collocation and endpoint-derivative matching)
/// exceeded the residual tolerance.
class SingularExpansion : public Error {
public:
    using Error::Error;
};

/// A stated precondition of the called operation does not hold.
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

/// The requested eigenvalue is not present in the spectrum.
class NotInSpectrum : public Error {
public:
    using Error::Error;
};

/// Scalar argument outside the supported range.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// The quotient family cannot supply the required number of independent
/// members.
class RankDeficiency : public Error {
public:
    using Error::Error;
};

/// An endpoint derivative that must be nonzero is numerically zero.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

/// A coefficient ratio escapes [h(a), h(b)] beyond the clamping tolerance:
/// the node for this index would leave the interval.
class RatioOutOfRange : public Error {
public:
    RatioOutOfRange(std::size_t index, double ratio, const std::string& what)
        : Error(what), index_(index), ratio_(ratio) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    [[nodiscard]] double ratio() const noexcept { return ratio_; }

private:
    std::size_t index_;
    double ratio_;
};

/// A problem description (JSON or preset name) could not be interpreted.
class SpecParseError : public Error {
public:
    using Error::Error;
};

}  // namespace bernstein
