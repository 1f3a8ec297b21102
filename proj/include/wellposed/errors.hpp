#pragma once

#include <stdexcept>
#include <string>

namespace wellposed {

/// Base class for all numerical failures raised by this library.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// An adaptive routine ran out of subdivisions / iterations before
/// reaching its tolerance.
class NonConvergent : public NumericError {
public:
    explicit NonConvergent(const std::string& what) : NumericError(what) {}
};

/// An integrand or derivative evaluated to NaN or +-inf.
class NonFinite : public NumericError {
public:
    explicit NonFinite(const std::string& what) : NumericError(what) {}
};

/// A weight collapsed numerically (e.g. underflow on most of a grid).
class Degenerate : public NumericError {
public:
    explicit Degenerate(const std::string& what) : NumericError(what) {}
};

/// Marginals of a transport problem do not match.
class Infeasible : public NumericError {
public:
    explicit Infeasible(const std::string& what) : NumericError(what) {}
};

/// Matrix iteration (square root, eigensolve) failed.
class NumericalFailure : public NumericError {
public:
    explicit NumericalFailure(const std::string& what) : NumericError(what) {}
};

/// The Bayes denominator vanished at the requested data point.
class ZeroEvidence : public NumericError {
public:
    explicit ZeroEvidence(const std::string& what) : NumericError(what) {}
};

/// The kernel density vanishes on a positive-measure subset of the
/// prior support; fixed-domain routes do not apply.
class ZeroDensity : public NumericError {
public:
    explicit ZeroDensity(const std::string& what) : NumericError(what) {}
};

/// A curvature parameter that must be positive was not.
class InvalidCurvature : public NumericError {
public:
    explicit InvalidCurvature(const std::string& what) : NumericError(what) {}
};

/// Alias used by the certificate routes for non-positive curvature.
class CurvatureNonPositive : public NumericError {
public:
    explicit CurvatureNonPositive(const std::string& what) : NumericError(what) {}
};

/// A sample-size threshold of a scaling bound was violated.
class ThresholdViolation : public NumericError {
public:
    explicit ThresholdViolation(const std::string& what) : NumericError(what) {}
};

/// A required supremum / constant was not supplied by the caller.
class MissingParam : public NumericError {
public:
    explicit MissingParam(const std::string& what) : NumericError(what) {}
};

/// 1/Q (or a similar reciprocal weight) fails integrability.
class NonIntegrable : public NumericError {
public:
    explicit NonIntegrable(const std::string& what) : NumericError(what) {}
};

/// Configuration file / CLI errors, with key context in the message.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wellposed
