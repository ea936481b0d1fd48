#include "vmrf/error.hpp"

namespace vmrf {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::degenerate_kernel: return "degenerate-kernel";
        case ErrorCode::boundary_singularity: return "boundary-singularity";
        case ErrorCode::quad_failure: return "quad-failure";
        case ErrorCode::kernel_degenerate: return "kernel-degenerate";
        case ErrorCode::local_determinism: return "local-determinism";
        case ErrorCode::kernel_discretization_failure: return "kernel-discretization-failure";
        case ErrorCode::transform_singular: return "transform-singular";
        case ErrorCode::shape_mismatch: return "shape-mismatch";
        case ErrorCode::step_exceeds_cap: return "step-exceeds-cap";
        case ErrorCode::separator_degenerate: return "separator-degenerate";
        case ErrorCode::cholesky_failure: return "cholesky-failure";
        case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

}  // namespace vmrf
