#include "singser/error.hpp"

namespace singser {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::Overflow: return "overflow";
        case ErrorCode::BudgetExceeded: return "budget_exceeded";
        case ErrorCode::OutOfExtent: return "out_of_extent";
        case ErrorCode::NonConvergence: return "non_convergence";
    }
    return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace singser
