#include "tth/error.hpp"
#include "tth/plan.hpp"

namespace tth {

namespace {

bool is_binary_merge(const PlanExpr& e) {
    return std::holds_alternative<op::Merge>(e.op) && e.inputs.size() == 2;
}

// R1: merge(X, merge(Y, Z)) -> merge(merge(X, Y), Z)
std::optional<PlanExpr> reassociate(const PlanExpr& e, const Catalog&) {
    if (!is_binary_merge(e) || !is_binary_merge(e.inputs[1])) return std::nullopt;
    const auto& x = e.inputs[0];
    const auto& y = e.inputs[1].inputs[0];
    const auto& z = e.inputs[1].inputs[1];
    return plan::merge(plan::merge(x, y), z);
}

// R2: coarsen(merge(X, Y), D) -> merge(coarsen(X, D), coarsen(Y, D)) for equal known grids.
std::optional<PlanExpr> push_coarsen(const PlanExpr& e, const Catalog& catalog) {
    const auto* c = std::get_if<op::Coarsen>(&e.op);
    if (!c || !is_binary_merge(e.inputs[0])) return std::nullopt;
    const auto& x = e.inputs[0].inputs[0];
    const auto& y = e.inputs[0].inputs[1];
    auto gx = check_types(x, catalog).grid;
    auto gy = check_types(y, catalog).grid;
    if (!gx || !gy || !(*gx == *gy)) return std::nullopt;
    return plan::merge(PlanExpr{*c, {x}}, PlanExpr{*c, {y}});
}

// R3: coarsen(coarsen(X, D1), D2) -> coarsen(X, D2) when widths chain as multiples.
std::optional<PlanExpr> fold_coarsen(const PlanExpr& e, const Catalog& catalog) {
    const auto* outer = std::get_if<op::Coarsen>(&e.op);
    if (!outer) return std::nullopt;
    const auto* inner = std::get_if<op::Coarsen>(&e.inputs[0].op);
    if (!inner || inner->start || inner->end) return std::nullopt;
    const Width& d1 = inner->width;
    const Width& d2 = outer->width;
    if (d1.unit != Width::Unit::days || d2.unit != Width::Unit::days || d1.amount <= 0 || d2.amount <= 0 ||
        d2.amount % d1.amount != 0) {
        return std::nullopt;
    }
    const auto& x = e.inputs[0].inputs[0];
    auto grid = check_types(x, catalog).grid;
    if (!grid || !grid->is_uniform() || d1.amount % grid->width() != 0) return std::nullopt;
    return PlanExpr{*outer, {x}};
}

struct Rule {
    const char* name;
    std::optional<PlanExpr> (*apply)(const PlanExpr&, const Catalog&);
};

constexpr Rule kRules[] = {
    {"R1 merge re-association", reassociate},
    {"R2 coarsen below merge", push_coarsen},
    {"R3 nested coarsen", fold_coarsen},
};

// Rewrites the first redex in pre-order; returns the rule applied, if any.
const Rule* step(PlanExpr& e, const Catalog& catalog) {
    for (const auto& rule : kRules) {
        if (auto out = rule.apply(e, catalog)) {
            e = std::move(*out);
            return &rule;
        }
    }
    for (auto& child : e.inputs) {
        if (const Rule* r = step(child, catalog)) return r;
    }
    return nullptr;
}

}  // namespace

RewriteTrace rewrite_traced(const PlanExpr& e, const Catalog& catalog) {
    check_types(e, catalog);
    RewriteTrace trace{e, {}, 0};
    const std::size_t limit = e.node_count() * std::size(kRules) * 4;
    while (const Rule* r = step(trace.expr, catalog)) {
        trace.applied.emplace_back(r->name);
        if (++trace.iterations > limit) {
            fail(ErrorKind::contract, "rewrite did not reach a fixed point within " + std::to_string(limit) +
                                          " steps");
        }
    }
    return trace;
}

PlanExpr rewrite(const PlanExpr& e, const Catalog& catalog) { return rewrite_traced(e, catalog).expr; }

}  // namespace tth
