#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tth {

/// Minimal s-expression tree shared by the plan and predicate text formats.
struct SExpr {
    enum class Kind { symbol, string, integer, real, list };

    Kind kind = Kind::list;
    std::string text;           // symbol / string contents, or the numeral spelling
    std::int64_t integer = 0;
    double real = 0;
    std::vector<SExpr> items;   // list elements
    std::size_t offset = 0;     // byte offset in the source, for messages

    bool is_list() const noexcept { return kind == Kind::list; }
    bool is_symbol(std::string_view s) const noexcept { return kind == Kind::symbol && text == s; }
    bool is_number() const noexcept { return kind == Kind::integer || kind == Kind::real; }
    double number() const noexcept { return kind == Kind::integer ? static_cast<double>(integer) : real; }
};

/// Parses exactly one expression (trailing input is a syntax error). ';' starts a
/// comment that runs to end of line.
SExpr parse_sexpr(std::string_view text);

/// Quotes a string literal with \" and \\ escapes.
std::string quote(std::string_view s);

/// Shortest round-trip spelling of a double.
std::string format_number(double v);

[[noreturn]] void syntax_error(const SExpr& at, const std::string& message);

}  // namespace tth
