#pragma once

#include <stdexcept>
#include <string>

namespace edgeledger {

// Error categories shared by the ledger pipeline, the contracts and the
// gateway. Each category maps to exactly one HTTP (status, code) pair.
enum class ErrorCode {
    unknown_operation,
    validation,
    not_found,
    duplicate,
    read_only_violation,
    no_eligible_server,
    unavailable,
};

class ContractError : public std::runtime_error {
  public:
    ContractError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

}  // namespace edgeledger
