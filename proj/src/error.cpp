#include "bdtest/error.hpp"

namespace bdt {

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::argument: return "argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::degenerate_range: return "degenerate_range";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::generation: return "generation";
    case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

} // namespace bdt
