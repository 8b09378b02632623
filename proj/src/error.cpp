#include "hypac/error.hpp"

#include <sstream>

namespace hypac {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::complex_roots: return "ComplexRootsError";
    case ErrorCode::window_too_small: return "WindowTooSmall";
    case ErrorCode::target_reached: return "TargetReached";
    case ErrorCode::step_failure: return "StepFailure";
    case ErrorCode::series_radius_too_large: return "SeriesRadiusTooLarge";
    case ErrorCode::eigenvector_undefined: return "EigenvectorUndefined";
    case ErrorCode::no_connection: return "NoConnection";
    case ErrorCode::bracket_invalid: return "BracketInvalid";
    case ErrorCode::max_iterations: return "MaxIterations";
    case ErrorCode::non_decreasing_energy: return "NonDecreasingEnergy";
    case ErrorCode::singular_jacobian: return "SingularJacobian";
    case ErrorCode::divergence: return "Divergence";
    case ErrorCode::empty_level_set: return "EmptyLevelSet";
    case ErrorCode::no_decay_solution: return "NoDecaySolution";
    case ErrorCode::contraction_failure: return "ContractionFailure";
    case ErrorCode::mean_not_zero: return "MeanNotZero";
    case ErrorCode::chart_mismatch: return "ChartMismatch";
    case ErrorCode::io: return "IOError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {
std::string complex_roots_message(double disc) {
    std::ostringstream os;
    os << "indicial polynomial has complex roots (discriminant " << disc << ")";
    return os.str();
}
}  // namespace

ComplexRootsError::ComplexRootsError(double discriminant)
    : Error(ErrorCode::complex_roots, complex_roots_message(discriminant)),
      discriminant_(discriminant) {}

SingularJacobianError::SingularJacobianError(double location, const std::string& message)
    : Error(ErrorCode::singular_jacobian, message), location_(location) {}

}  // namespace hypac
