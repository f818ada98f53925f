#pragma once

#include <stdexcept>
#include <string>

namespace bdt {

// Mirrors bdt_status in bdtest.h; keep the numeric values in sync.
enum class ErrorCode : int {
    argument = 1,
    parse = 2,
    io = 3,
    capacity = 4,
    unsupported = 5,
    degenerate_range = 6,
    precondition = 7,
    generation = 8,
    internal = 9,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what)
{
    if (!cond) fail(code, what);
}

} // namespace bdt
