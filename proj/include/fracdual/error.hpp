#pragma once

#include <stdexcept>
#include <string>

namespace fracdual {

enum class ErrorCode {
    InvalidArgument,  // parameter outside its admissible range
    Domain,           // evaluation point outside the supported domain
    NonConverged,     // series cap reached or cancellation beyond working precision
    QuadratureFail,   // adaptive refinement exhausted its budget
    CflViolation,     // explicit scheme would lose nonnegativity
    GridMismatch      // grids cannot be combined node-by-node
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
        case ErrorCode::Domain: return "DOMAIN";
        case ErrorCode::NonConverged: return "NON_CONVERGED";
        case ErrorCode::QuadratureFail: return "QUADRATURE_FAIL";
        case ErrorCode::CflViolation: return "CFL_VIOLATION";
        case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    }
    return "UNKNOWN";
}

/// True for failures of a numerical method (as opposed to bad input).
inline bool is_numerical(ErrorCode code) noexcept {
    return code == ErrorCode::NonConverged || code == ErrorCode::QuadratureFail ||
           code == ErrorCode::CflViolation;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fracdual
