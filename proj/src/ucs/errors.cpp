#include "ucs/errors.hpp"

namespace ucs {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::UniverseMismatch: return "universe_mismatch";
    case ErrorCode::ZeroProbability: return "zero_probability";
    case ErrorCode::BudgetExhausted: return "budget_exhausted";
    case ErrorCode::CapExceeded: return "cap_exceeded";
    case ErrorCode::MalformedCodeword: return "malformed_codeword";
    case ErrorCode::DecodeFailed: return "decode_failed";
    case ErrorCode::NoQualifyingLeader: return "no_qualifying_leader";
    case ErrorCode::NoChainFound: return "no_chain_found";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

} // namespace ucs
