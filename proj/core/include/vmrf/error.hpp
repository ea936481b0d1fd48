#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vmrf {

enum class ErrorCode {
    invalid_argument,
    degenerate_kernel,
    boundary_singularity,
    quad_failure,
    kernel_degenerate,
    local_determinism,
    kernel_discretization_failure,
    transform_singular,
    shape_mismatch,
    step_exceeds_cap,
    separator_degenerate,
    cholesky_failure,
    io_error,
};

// Stable kebab-case name used in CLI output and JSON reports.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised by checked quadrature when refinement does not reach the requested tolerance.
class QuadFailure : public Error {
public:
    QuadFailure(const std::string& what, double achieved_tol)
        : Error(ErrorCode::quad_failure, what), achieved_tol_(achieved_tol) {}
    double achieved_tolerance() const noexcept { return achieved_tol_; }

private:
    double achieved_tol_;
};

// Raised when a Schur extension step finds lambda_n at or below the tolerance.
class LocalDeterminism : public Error {
public:
    LocalDeterminism(const std::string& what, std::size_t step, double lambda)
        : Error(ErrorCode::local_determinism, what), step_(step), lambda_(lambda) {}
    std::size_t step() const noexcept { return step_; }
    double lambda() const noexcept { return lambda_; }

private:
    std::size_t step_;
    double lambda_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::invalid_argument, what);
}

}  // namespace vmrf
