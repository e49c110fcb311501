#pragma once

#include <stdexcept>
#include <string>

namespace nimh {

// Outcome categories; the numeric values double as CLI exit codes.
enum class Status : int {
    Ok = 0,
    NotApplicable = 1,
    Refused = 2,
    InvalidInput = 3,
};

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Ok: return "ok";
    case Status::NotApplicable: return "not-applicable";
    case Status::Refused: return "refused";
    case Status::InvalidInput: return "invalid-input";
    }
    return "unknown";
}

// Every failure carries a short machine-readable reason code plus a human message.
class Error : public std::runtime_error {
public:
    Error(Status status, std::string reason, const std::string& message)
        : std::runtime_error(message), status_(status), reason_(std::move(reason)) {}

    Status status() const noexcept { return status_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    Status status_;
    std::string reason_;
};

inline Error invalid_input(std::string reason, const std::string& message) {
    return Error(Status::InvalidInput, std::move(reason), message);
}

inline Error refused(std::string reason, const std::string& message) {
    return Error(Status::Refused, std::move(reason), message);
}

inline Error not_applicable(std::string reason, const std::string& message) {
    return Error(Status::NotApplicable, std::move(reason), message);
}

} // namespace nimh
