#include "plan_gen.hpp"

namespace tth::testing {

namespace {

const std::int64_t kWidths[] = {1, 2, 4, 8};

std::vector<std::int64_t> divisors(std::int64_t w) {
    std::vector<std::int64_t> out;
    for (auto d : kWidths) {
        if (d <= w && w % d == 0) out.push_back(d);
    }
    return out;
}

}  // namespace

Predicate PlanGenerator::predicate() {
    switch (rng_.below(5)) {
        case 0: {
            std::string text = "(in term";
            const std::size_t n = 1 + rng_.below(3);
            for (std::size_t i = 0; i < n; ++i) text += " \"" + terms_[rng_.below(terms_.size())] + "\"";
            return parse_predicate(text + ")");
        }
        case 1: return parse_predicate("(> count " + std::to_string(rng_.below(3)) + ")");
        case 2: return parse_predicate("(<= ts " + std::to_string(rng_.below(6)) + ")");
        case 3: return parse_predicate("(not (= term \"" + terms_[rng_.below(terms_.size())] + "\"))");
        default: return parse_predicate("(true)");
    }
}

PlanExpr PlanGenerator::histogram(int depth, std::int64_t width) {
    if (depth <= 0 || rng_.chance(0.2)) {
        PlanExpr src = plan::source(sources_[rng_.below(sources_.size())]);
        return width == 1 ? src : plan::coarsen(Width::days(width), std::move(src));
    }
    switch (rng_.below(4)) {
        case 0: return plan::select(predicate(), histogram(depth - 1, width));
        case 1: {
            auto ds = divisors(width);
            return plan::coarsen(Width::days(width), histogram(depth - 1, ds[rng_.below(ds.size())]));
        }
        default: return plan::merge(histogram(depth - 1, width), histogram(depth - 1, width));
    }
}

PlanExpr PlanGenerator::any(int depth) {
    const std::int64_t width = kWidths[rng_.below(4)];
    PlanExpr h = histogram(depth, width);
    switch (rng_.below(7)) {
        case 0: return plan::project({"term", "ts", "count"}, rng_.chance(0.5), std::move(h));
        case 1: return plan::collapse(rng_.chance(0.5) ? Axis::term : Axis::ts, std::move(h));
        case 2: return plan::top(1 + rng_.below(4), plan::sort(SortAxis::count, SortOrder::desc, std::move(h)));
        case 3: return plan::apply(parse_function_call("sum"), std::move(h));
        default: return h;
    }
}

}  // namespace tth::testing
