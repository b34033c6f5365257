#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tth {

/// Failure categories raised by the engine. The CLI maps them onto exit codes.
enum class ErrorKind {
    schema,                  // unknown field, category, attribute or function signature
    argument,                // invalid parameter value
    syntax,                  // malformed plan / predicate text
    lookup,                  // unknown term
    type,                    // ill-typed plan expression
    registry,                // unknown histogram function
    contract,                // violated input contract (e.g. unsorted doc list)
    estimation,              // missing statistics for cost estimation
    alignment,               // grid / window / width validation failure
    range,                   // inverted or empty window
    parse,                   // unparseable data value (timestamp, snapshot line)
    conflict,                // duplicate key or document id
    dependency,              // missing forward index
    absent_row,              // getRecords on keys that are not stored
    undefined_distribution,  // KL divergence over an empty histogram
    insufficient_data,       // not enough qualifying intervals for a test
    io,                      // file system failure
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for an error kind: 2 schema/argument, 3 alignment/validation,
/// 4 data/dependency.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace tth
