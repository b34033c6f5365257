#include "tth/error.hpp"

namespace tth {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::schema: return "schema error";
        case ErrorKind::argument: return "argument error";
        case ErrorKind::syntax: return "syntax error";
        case ErrorKind::lookup: return "lookup error";
        case ErrorKind::type: return "type error";
        case ErrorKind::registry: return "registry error";
        case ErrorKind::contract: return "contract error";
        case ErrorKind::estimation: return "estimation error";
        case ErrorKind::alignment: return "alignment error";
        case ErrorKind::range: return "range error";
        case ErrorKind::parse: return "parse error";
        case ErrorKind::conflict: return "conflict error";
        case ErrorKind::dependency: return "dependency error";
        case ErrorKind::absent_row: return "absent-row error";
        case ErrorKind::undefined_distribution: return "undefined-distribution error";
        case ErrorKind::insufficient_data: return "insufficient-data error";
        case ErrorKind::io: return "io error";
    }
    return "error";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::schema:
        case ErrorKind::argument:
        case ErrorKind::syntax:
        case ErrorKind::lookup:
        case ErrorKind::type:
        case ErrorKind::registry:
        case ErrorKind::contract:
        case ErrorKind::estimation:
            return 2;
        case ErrorKind::alignment:
        case ErrorKind::range:
            return 3;
        default:
            return 4;
    }
}

}  // namespace tth
