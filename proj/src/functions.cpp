#include "tth/functions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "tth/error.hpp"

namespace tth {

FunctionCall parse_function_call(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    FunctionCall call;
    auto open = text.find('(');
    call.name = std::string(trim(text.substr(0, open)));
    if (call.name.empty()) {
        fail(ErrorKind::syntax, "missing function name in '" + std::string(text) + "'");
    }
    for (char c : call.name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
            fail(ErrorKind::syntax, "bad function name '" + call.name + "'");
        }
    }
    if (open == std::string_view::npos) return call;
    if (text.back() != ')') {
        fail(ErrorKind::syntax, "unclosed argument list in '" + std::string(text) + "'");
    }
    std::string_view inner = trim(text.substr(open + 1, text.size() - open - 2));
    while (!inner.empty()) {
        auto comma = inner.find(',');
        auto arg = trim(inner.substr(0, comma));
        if (arg.empty() || arg.find_first_of("()") != std::string_view::npos) {
            fail(ErrorKind::syntax, "bad argument list in '" + std::string(text) + "'");
        }
        call.args.emplace_back(arg);
        if (comma == std::string_view::npos) break;
        inner = inner.substr(comma + 1);
        if (trim(inner).empty()) fail(ErrorKind::syntax, "trailing comma in '" + std::string(text) + "'");
    }
    return call;
}

std::string to_text(const FunctionCall& call) {
    if (call.args.empty()) return call.name;
    std::string out = call.name + "(";
    for (std::size_t i = 0; i < call.args.size(); ++i) out += (i ? "," : "") + call.args[i];
    return out + ")";
}

namespace {

void expect_args(const std::string& name, const std::vector<std::string>& args, std::size_t n) {
    if (args.size() != n) {
        fail(ErrorKind::argument, name + " expects " + std::to_string(n) + " argument(s), got " +
                                      std::to_string(args.size()));
    }
}

ArgValues extreme(const TTH& tth, bool want_max) {
    if (tth.empty()) return {};
    Count best = tth.rows().front().count;
    for (const auto& r : tth.rows()) best = want_max ? std::max(best, r.count) : std::min(best, r.count);
    ArgResult out{static_cast<double>(best), {}};
    for (const auto& r : tth.rows()) {
        if (r.count == best) out.keys.push_back(r.key());
    }
    return {out};
}

std::vector<RowKey> all_keys(const TTH& tth) {
    std::vector<RowKey> keys;
    keys.reserve(tth.size());
    for (const auto& r : tth.rows()) keys.push_back(r.key());
    return keys;
}

// Visits each (term, aux) series as a zero-filled vector over [first, last].
template <typename Visit>
void for_each_series(const TTH& tth, Visit&& visit) {
    if (tth.empty()) return;
    Interval first = tth.rows().front().interval;
    Interval last = first;
    for (const auto& r : tth.rows()) {
        first = std::min(first, r.interval);
        last = std::max(last, r.interval);
    }
    std::map<std::pair<TermId, AuxValues>, std::vector<const TTHRow*>> series;
    for (const auto& r : tth.rows()) series[{r.term, r.aux}].push_back(&r);
    const auto length = static_cast<std::size_t>(last - first + 1);
    for (const auto& [key, rows] : series) {
        std::vector<const TTHRow*> cells(length, nullptr);
        for (const auto* r : rows) cells[static_cast<std::size_t>(r->interval - first)] = r;
        visit(cells);
    }
}

ArgValues find_modes(const TTH& tth) {
    ArgValues out;
    for_each_series(tth, [&](const std::vector<const TTHRow*>& cells) {
        auto count = [&](std::size_t i) { return cells[i] ? cells[i]->count : 0; };
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!cells[i]) continue;
            bool left = i == 0 || count(i) > count(i - 1);
            bool right = i + 1 == cells.size() || count(i) > count(i + 1);
            if (left && right) out.push_back({static_cast<double>(cells[i]->count), {cells[i]->key()}});
        }
    });
    return out;
}

ArgValues find_moments(const TTH& tth, const std::vector<std::string>& args) {
    expect_args("findMoments", args, 1);
    int k = 0;
    auto [p, ec] = std::from_chars(args[0].data(), args[0].data() + args[0].size(), k);
    if (ec != std::errc{} || p != args[0].data() + args[0].size() || k < 1) {
        fail(ErrorKind::argument, "findMoments needs a positive integer order, got '" + args[0] + "'");
    }
    if (tth.empty()) return {};
    double n = static_cast<double>(tth.size());
    double mean = 0;
    for (const auto& r : tth.rows()) mean += static_cast<double>(r.count);
    mean /= n;
    auto keys = all_keys(tth);
    ArgValues out{{mean, keys}};
    for (int order = 2; order <= k; ++order) {
        double m = 0;
        for (const auto& r : tth.rows()) m += std::pow(static_cast<double>(r.count) - mean, order);
        out.push_back({m / n, keys});
    }
    return out;
}

}  // namespace

ArgValues max_slopes(const TTH& tth) {
    ArgValues out;
    for_each_series(tth, [&](const std::vector<const TTHRow*>& cells) {
        if (cells.size() < 2) return;
        auto count = [&](std::size_t i) { return cells[i] ? cells[i]->count : 0; };
        std::size_t best = 0;
        Count best_slope = count(1) - count(0);
        for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
            Count s = count(i + 1) - count(i);
            if (s > best_slope) {
                best_slope = s;
                best = i;
            }
        }
        ArgResult r{static_cast<double>(best_slope), {}};
        if (cells[best + 1]) r.keys.push_back(cells[best + 1]->key());
        out.push_back(std::move(r));
    });
    return out;
}

FunctionRegistry FunctionRegistry::with_builtins() {
    FunctionRegistry reg;
    reg.add("min", [](const TTH& t, const std::vector<std::string>& a) {
        expect_args("min", a, 0);
        return extreme(t, false);
    });
    reg.add("max", [](const TTH& t, const std::vector<std::string>& a) {
        expect_args("max", a, 0);
        return extreme(t, true);
    });
    reg.add("sum", [](const TTH& t, const std::vector<std::string>& a) {
        expect_args("sum", a, 0);
        return ArgValues{{static_cast<double>(t.total_count()), all_keys(t)}};
    });
    reg.add("mean", [](const TTH& t, const std::vector<std::string>& a) {
        expect_args("mean", a, 0);
        return find_moments(t, {"1"});
    });
    reg.add("findModes", [](const TTH& t, const std::vector<std::string>& a) {
        expect_args("findModes", a, 0);
        return find_modes(t);
    });
    reg.add("findMoments", find_moments);
    reg.add("findMaxSlope", [](const TTH& t, const std::vector<std::string>& a) {
        if (!a.empty() && a != std::vector<std::string>{"count", "ts"}) {
            fail(ErrorKind::argument, "findMaxSlope works on (count, ts)");
        }
        return max_slopes(t);
    });
    return reg;
}

const FunctionRegistry& FunctionRegistry::builtins() {
    static const FunctionRegistry instance = with_builtins();
    return instance;
}

void FunctionRegistry::add(std::string name, Fn fn) { functions_[std::move(name)] = std::move(fn); }

std::vector<std::string> FunctionRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, fn] : functions_) out.push_back(name);
    return out;
}

ArgValues FunctionRegistry::apply_arg(const TTH& tth, const FunctionCall& call) const {
    auto it = functions_.find(call.name);
    if (it == functions_.end()) {
        fail(ErrorKind::registry, "unknown histogram function '" + call.name + "'");
    }
    return it->second(tth, call.args);
}

std::vector<double> FunctionRegistry::apply(const TTH& tth, const FunctionCall& call) const {
    std::vector<double> out;
    for (const auto& r : apply_arg(tth, call)) out.push_back(r.value);
    return out;
}

}  // namespace tth
