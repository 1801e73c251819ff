#pragma once

#include <stdexcept>
#include <string>

namespace zetalab {

// Error taxonomy mirrored by the C API status codes in include/zetalab.h.
enum class ErrorCode {
    domain = 1,       // argument outside the supported region
    pole,             // evaluation too close to s = 1
    unsupported,      // valid input, but outside this implementation's range
    resource,         // memory / size guard tripped
    accuracy,         // requested tolerance not reachable
    invalid_input,    // malformed argument (bad grid, duplicate frequency, ...)
    io                // file read/write failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg)
        : std::runtime_error(std::move(msg)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

inline void require(bool ok, ErrorCode code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

} // namespace zetalab
