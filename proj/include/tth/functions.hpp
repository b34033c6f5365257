#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tth/tth.hpp"

namespace tth {

/// A histogram function reference such as `max` or `findMoments(2)`.
struct FunctionCall {
    std::string name;
    std::vector<std::string> args;

    bool operator==(const FunctionCall&) const = default;
};

/// Parses `name` or `name(arg, ...)`; syntax error otherwise.
FunctionCall parse_function_call(std::string_view text);
std::string to_text(const FunctionCall& call);

/// One applyArg result: a value and the rows that produce it.
struct ArgResult {
    double value = 0;
    std::vector<RowKey> keys;

    bool operator==(const ArgResult&) const = default;
};

using ArgValues = std::vector<ArgResult>;

/// Named histogram functions evaluated over the count field. Each function yields
/// (value, rows) pairs; `apply` keeps only the values.
class FunctionRegistry {
public:
    using Fn = std::function<ArgValues(const TTH&, const std::vector<std::string>& args)>;

    /// Registry preloaded with min, max, sum, mean, findModes, findMoments(k) and
    /// findMaxSlope(count, ts).
    static FunctionRegistry with_builtins();
    /// Shared instance of `with_builtins()`.
    static const FunctionRegistry& builtins();

    void add(std::string name, Fn fn);
    bool contains(const std::string& name) const { return functions_.contains(name); }
    std::vector<std::string> names() const;

    /// Registry error for unknown names; argument error for bad arguments.
    std::vector<double> apply(const TTH& tth, const FunctionCall& call) const;
    ArgValues apply_arg(const TTH& tth, const FunctionCall& call) const;

private:
    std::map<std::string, Fn> functions_;
};

/// Per (term, aux) series over the histogram's full interval range with gaps zero-filled:
/// the largest increase between consecutive intervals, keyed by the upper row when it is
/// stored. Ties go to the earliest edge. Histograms spanning fewer than two intervals
/// yield nothing.
ArgValues max_slopes(const TTH& tth);

}  // namespace tth
