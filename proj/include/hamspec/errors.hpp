#pragma once

#include <stdexcept>
#include <string>

namespace hamspec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: shapes, malformed files, unsupported manifold specs, ...
class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A homology class that does not belong to the complex/manifold at hand.
class ClassError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Mismatched or unsupported manifold specification.
class SpecError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Recapping requested on a lattice with infinite rationality constant.
class RecappingUnavailable : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Two eigenvalues of a CP^n torus-action Hamiltonian coincide.
class DegenerateFixedPoint : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Failure of a numerical procedure on otherwise valid input.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The endpoint of a symplectic path has eigenvalue 1.
class DegeneracyError : public NumericalError {
public:
    DegeneracyError(const std::string& what, double det)
        : NumericalError(what), det_(det) {}

    /// det(Phi(T) - I) at the offending endpoint.
    double determinant() const noexcept { return det_; }

private:
    double det_;
};

/// Sampled path too coarse to track a winding unambiguously.
class ResolutionError : public NumericalError {
public:
    ResolutionError(const std::string& what, double t)
        : NumericalError(what), t_(t) {}

    double time() const noexcept { return t_; }

private:
    double t_;
};

}  // namespace hamspec
