#include "edgeledger/errors.hpp"

namespace edgeledger {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_operation: return "unknown-operation";
        case ErrorCode::validation: return "validation";
        case ErrorCode::not_found: return "not-found";
        case ErrorCode::duplicate: return "duplicate";
        case ErrorCode::read_only_violation: return "read-only-violation";
        case ErrorCode::no_eligible_server: return "no-eligible-server";
        case ErrorCode::unavailable: return "ledger-unavailable";
    }
    return "unknown";
}

}  // namespace edgeledger
