#include "supplyrank/error.hpp"

namespace supplyrank {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::domain: return "domain";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::network: return "network";
    case ErrorKind::io: return "io";
    case ErrorKind::environment: return "environment";
    }
    return "unknown";
}

} // namespace supplyrank
