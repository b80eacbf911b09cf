#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace bridgekit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite samples, out-of-range parameters, mismatched grids.
class InputError : public Error {
public:
    using Error::Error;
};

/// A density does not carry unit mass on its grid (usually a grid that is too narrow).
class MassDeficitError : public Error {
public:
    MassDeficitError(const std::string& what, double captured_mass)
        : Error(what), captured_mass_(captured_mass) {}
    double captured_mass() const noexcept { return captured_mass_; }

private:
    double captured_mass_;
};

/// p charges a point where the reference weight vanishes.
class AbsoluteContinuityError : public Error {
public:
    using Error::Error;
};

/// A requested case lies outside the closed-form family handled here.
class UnsupportedCaseError : public Error {
public:
    using Error::Error;
};

/// Kernel rows lose mass on the grid (kernel too wide or not resolved by the spacing).
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::size_t worst_row, double captured_mass)
        : Error(what), worst_row_(worst_row), captured_mass_(captured_mass) {}
    std::size_t worst_row() const noexcept { return worst_row_; }
    double captured_mass() const noexcept { return captured_mass_; }

private:
    std::size_t worst_row_;
    double captured_mass_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double marginal_error, std::size_t iterations)
        : Error(what), marginal_error_(marginal_error), iterations_(iterations) {}
    double marginal_error() const noexcept { return marginal_error_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    double marginal_error_;
    std::size_t iterations_;
};

/// A marginal density vanishes where the solver has to divide by it.
class DivisionGuardError : public Error {
public:
    using Error::Error;
};

/// Interpolated mass drifted beyond what renormalization may absorb.
class DiscretizationError : public Error {
public:
    using Error::Error;
};

class IllConditionedPathError : public Error {
public:
    using Error::Error;
};

/// Contraction schedule evaluated outside its admissible range of b.
class DomainError : public Error {
public:
    DomainError(const std::string& what, double b_max) : Error(what), b_max_(b_max) {}
    double b_max() const noexcept { return b_max_; }

private:
    double b_max_;
};

class ModelMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace bridgekit
