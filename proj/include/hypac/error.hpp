#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypac {

enum class ErrorCode {
    invalid_argument,
    complex_roots,
    window_too_small,
    target_reached,
    step_failure,
    series_radius_too_large,
    eigenvector_undefined,
    no_connection,
    bracket_invalid,
    max_iterations,
    non_decreasing_energy,
    singular_jacobian,
    divergence,
    empty_level_set,
    no_decay_solution,
    contraction_failure,
    mean_not_zero,
    chart_mismatch,
    io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base of every failure raised by the toolkit. The code is what callers
/// (and the CLI exit-status mapping) switch on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by indicial_roots when (n-1)^2 < 4 mu.
class ComplexRootsError : public Error {
public:
    explicit ComplexRootsError(double discriminant);
    double discriminant() const noexcept { return discriminant_; }

private:
    double discriminant_;
};

/// Raised by Newton solvers when a pivot collapses; `location` is the
/// coordinate (t for 1D, a node index for 2D) of the offending row.
class SingularJacobianError : public Error {
public:
    SingularJacobianError(double location, const std::string& message);
    double location() const noexcept { return location_; }

private:
    double location_;
};

}  // namespace hypac
