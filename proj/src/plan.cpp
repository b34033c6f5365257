#include "tth/plan.hpp"

#include <cmath>

#include "tth/error.hpp"

namespace tth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

PlanExpr node(PlanExpr::Op op, std::vector<PlanExpr> inputs = {}) { return PlanExpr{std::move(op), std::move(inputs)}; }

}  // namespace

std::size_t PlanExpr::node_count() const {
    std::size_t n = 1;
    for (const auto& in : inputs) n += in.node_count();
    return n;
}

std::string op_name(const PlanExpr::Op& op) {
    return std::visit(overloaded{
                          [](const op::Source&) { return "source"; },
                          [](const op::Select&) { return "select"; },
                          [](const op::Project&) { return "project"; },
                          [](const op::Coarsen&) { return "coarsen"; },
                          [](const op::Merge&) { return "merge"; },
                          [](const op::Group&) { return "group"; },
                          [](const op::Apply&) { return "apply"; },
                          [](const op::ApplyArg&) { return "applyArg"; },
                          [](const op::Sort&) { return "sort"; },
                          [](const op::Top&) { return "top"; },
                          [](const op::Collapse&) { return "collapse"; },
                          [](const op::Distance&) { return "distance"; },
                          [](const op::IndexOp&) { return "indexOp"; },
                          [](const op::QueryIndex&) { return "queryIndex"; },
                          [](const op::ExtractAxis&) { return "extractAxis"; },
                          [](const op::GetRecords&) { return "getRecords"; },
                          [](const op::Docs&) { return "docs"; },
                          [](const op::DocsOf&) { return "docsOf"; },
                      },
                      op);
}

namespace plan {

PlanExpr source(std::string name) { return node(op::Source{std::move(name)}); }
PlanExpr select(Predicate p, PlanExpr in) { return node(op::Select{std::move(p)}, {std::move(in)}); }
PlanExpr project(std::vector<std::string> attrs, bool distinct, PlanExpr in) {
    return node(op::Project{std::move(attrs), distinct}, {std::move(in)});
}
PlanExpr coarsen(Width width, PlanExpr in, std::optional<Date> start, std::optional<Date> end) {
    return node(op::Coarsen{width, start, end}, {std::move(in)});
}
PlanExpr merge(PlanExpr a, PlanExpr b) { return node(op::Merge{}, {std::move(a), std::move(b)}); }
PlanExpr merge_parts(PlanExpr in) { return node(op::Merge{}, {std::move(in)}); }
PlanExpr group(std::vector<std::string> vars, PlanExpr in) {
    return node(op::Group{std::move(vars)}, {std::move(in)});
}
PlanExpr apply(FunctionCall fn, PlanExpr in) { return node(op::Apply{std::move(fn)}, {std::move(in)}); }
PlanExpr apply_arg(FunctionCall fn, PlanExpr in) { return node(op::ApplyArg{std::move(fn)}, {std::move(in)}); }
PlanExpr sort(SortAxis axis, SortOrder order, PlanExpr in) { return node(op::Sort{axis, order}, {std::move(in)}); }
PlanExpr top(std::size_t k, PlanExpr in, std::optional<std::string> distinct) {
    return node(op::Top{k, std::move(distinct)}, {std::move(in)});
}
PlanExpr collapse(Axis axis, PlanExpr in) { return node(op::Collapse{axis}, {std::move(in)}); }
PlanExpr distance(Metric metric, PlanExpr a, PlanExpr b) {
    return node(op::Distance{metric}, {std::move(a), std::move(b)});
}
PlanExpr index_op(IndexOpKind kind, PlanExpr a, PlanExpr b) {
    return node(op::IndexOp{kind}, {std::move(a), std::move(b)});
}
PlanExpr query_index(PlanExpr tth, PlanExpr docs, std::optional<Date> start, std::optional<Date> end) {
    return node(op::QueryIndex{start, end}, {std::move(tth), std::move(docs)});
}
PlanExpr extract_axis(Axis axis, PlanExpr in) { return node(op::ExtractAxis{axis}, {std::move(in)}); }
PlanExpr get_records(PlanExpr tth, PlanExpr args) { return node(op::GetRecords{}, {std::move(tth), std::move(args)}); }
PlanExpr docs(DocList list) { return node(op::Docs{std::move(list)}); }
PlanExpr docs_of(PlanExpr in) { return node(op::DocsOf{}, {std::move(in)}); }

}  // namespace plan

// ---------------------------------------------------------------------------
// Types

std::string_view to_string(ValueKind kind) noexcept {
    switch (kind) {
        case ValueKind::tth: return "histogram";
        case ValueKind::sorted: return "sorted histogram";
        case ValueKind::marginal: return "marginal";
        case ValueKind::values: return "values";
        case ValueKind::arg_values: return "applyArg values";
        case ValueKind::axis: return "axis vector";
        case ValueKind::relation: return "relation";
        case ValueKind::doc_list: return "document list";
        case ValueKind::key_set: return "key set";
        case ValueKind::scalar: return "scalar";
    }
    return "?";
}

namespace {

bool histogram_like(ValueKind k) { return k == ValueKind::tth || k == ValueKind::sorted; }

std::optional<TimeGrid> coarsened_grid(const std::optional<TimeGrid>& grid, const Width& width) {
    if (!grid || width.amount <= 0) return std::nullopt;
    try {
        if (grid->is_uniform()) {
            if (width.unit != Width::Unit::days || width.amount % grid->width() != 0) return std::nullopt;
            return TimeGrid::uniform(grid->origin(), width.amount);
        }
        if (width.unit != Width::Unit::months) return std::nullopt;
        return TimeGrid::calendar_months(grid->boundaries().front(), grid->boundaries().back(),
                                         static_cast<int>(width.amount));
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::optional<TimeGrid> merged_grid(const std::optional<TimeGrid>& a, const std::optional<TimeGrid>& b) {
    if (!a || !b) return std::nullopt;
    if (*a == *b) return a;
    if (a->is_uniform() && b->is_uniform() && a->width() == b->width() &&
        (a->origin() - b->origin()) % a->width() == 0) {
        return TimeGrid::uniform(std::min(a->origin(), b->origin()), a->width());
    }
    return std::nullopt;
}

class TypeChecker {
public:
    explicit TypeChecker(const Catalog& catalog) : catalog_(catalog) {}

    PlanType check(const PlanExpr& e) {
        std::vector<PlanType> in;
        for (const auto& child : e.inputs) in.push_back(check(child));
        const std::string name = op_name(e.op);
        auto arity = [&](std::size_t n) {
            if (e.inputs.size() != n) {
                fail(ErrorKind::type, name + " takes " + std::to_string(n) + " input(s), got " +
                                          std::to_string(e.inputs.size()));
            }
        };
        auto expect = [&](std::size_t i, auto&& ok, std::string_view what) {
            if (!ok(in[i].kind)) {
                fail(ErrorKind::type, name + " input " + std::to_string(i) + " must be " + std::string(what) + ", got " +
                                          std::string(to_string(in[i].kind)));
            }
        };
        auto same_partitioning = [&] {
            if (in[0].partitioned != in[1].partitioned) {
                fail(ErrorKind::type, name + " mixes partitioned and unpartitioned inputs");
            }
            return in[0].partitioned;
        };
        auto is_hist = [](ValueKind k) { return histogram_like(k); };
        auto kind_is = [](ValueKind want) { return [want](ValueKind k) { return k == want; }; };
        return std::visit(
            overloaded{
                [&](const op::Source& s) -> PlanType {
                    arity(0);
                    PlanType t;
                    if (!catalog_.empty()) {
                        auto it = catalog_.find(s.name);
                        if (it == catalog_.end()) fail(ErrorKind::lookup, "unbound source '" + s.name + "'");
                        t.grid = it->second.grid;
                    }
                    return t;
                },
                [&](const op::Select&) -> PlanType {
                    arity(1);
                    expect(0, [](ValueKind k) { return histogram_like(k) || k == ValueKind::arg_values; },
                           "a histogram or applyArg values");
                    return in[0];
                },
                [&](const op::Project&) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    return {ValueKind::relation, in[0].partitioned, {}};
                },
                [&](const op::Coarsen& c) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    return {ValueKind::tth, in[0].partitioned, coarsened_grid(in[0].grid, c.width)};
                },
                [&](const op::Merge&) -> PlanType {
                    if (e.inputs.size() == 1) {
                        expect(0, is_hist, "a histogram");
                        if (!in[0].partitioned) fail(ErrorKind::type, "unary merge needs a partitioned histogram");
                        return {ValueKind::tth, false, in[0].grid};
                    }
                    arity(2);
                    expect(0, is_hist, "a histogram");
                    expect(1, is_hist, "a histogram");
                    bool p = same_partitioning();
                    return {ValueKind::tth, p, merged_grid(in[0].grid, in[1].grid)};
                },
                [&](const op::Group&) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    if (in[0].partitioned) fail(ErrorKind::type, "cannot group an already partitioned histogram");
                    return {ValueKind::tth, true, in[0].grid};
                },
                [&](const op::Apply&) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    return {ValueKind::values, in[0].partitioned, {}};
                },
                [&](const op::ApplyArg&) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    return {ValueKind::arg_values, in[0].partitioned, {}};
                },
                [&](const op::Sort&) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    return {ValueKind::sorted, in[0].partitioned, in[0].grid};
                },
                [&](const op::Top& t) -> PlanType {
                    arity(1);
                    expect(0, kind_is(ValueKind::sorted), "a sorted histogram");
                    if (t.distinct && *t.distinct != "term" && *t.distinct != "ts") {
                        fail(ErrorKind::type, "top :distinct must be term or ts");
                    }
                    return in[0];
                },
                [&](const op::Collapse&) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    return {ValueKind::marginal, in[0].partitioned, {}};
                },
                [&](const op::Distance&) -> PlanType {
                    arity(2);
                    expect(0, is_hist, "a histogram");
                    expect(1, is_hist, "a histogram");
                    return {ValueKind::scalar, same_partitioning(), {}};
                },
                [&](const op::IndexOp&) -> PlanType {
                    arity(2);
                    expect(0, kind_is(ValueKind::doc_list), "a document list");
                    expect(1, kind_is(ValueKind::doc_list), "a document list");
                    return {ValueKind::doc_list, same_partitioning(), {}};
                },
                [&](const op::QueryIndex&) -> PlanType {
                    arity(2);
                    expect(0, is_hist, "a histogram");
                    expect(1, kind_is(ValueKind::doc_list), "a document list");
                    return {ValueKind::key_set, same_partitioning(), {}};
                },
                [&](const op::ExtractAxis&) -> PlanType {
                    arity(1);
                    expect(0, is_hist, "a histogram");
                    return {ValueKind::axis, in[0].partitioned, {}};
                },
                [&](const op::GetRecords&) -> PlanType {
                    arity(2);
                    expect(0, is_hist, "a histogram");
                    expect(1, kind_is(ValueKind::arg_values), "applyArg values");
                    return {ValueKind::tth, same_partitioning(), in[0].grid};
                },
                [&](const op::Docs&) -> PlanType {
                    arity(0);
                    return {ValueKind::doc_list, false, {}};
                },
                [&](const op::DocsOf&) -> PlanType {
                    arity(1);
                    expect(0, [](ValueKind k) { return histogram_like(k) || k == ValueKind::marginal; },
                           "a histogram or marginal");
                    return {ValueKind::doc_list, in[0].partitioned, {}};
                },
            },
            e.op);
    }

private:
    const Catalog& catalog_;
};

}  // namespace

PlanType check_types(const PlanExpr& e, const Catalog& catalog) { return TypeChecker(catalog).check(e); }

// ---------------------------------------------------------------------------
// Cost

namespace {

struct Estimate {
    double cost = 0;
    double rows = 0;
    std::optional<TimeGrid> grid;
};

Estimate estimate(const PlanExpr& e, const Catalog& catalog) {
    std::vector<Estimate> in;
    for (const auto& child : e.inputs) in.push_back(estimate(child, catalog));
    double child_cost = 0;
    double child_rows = 0;
    for (const auto& c : in) {
        child_cost += c.cost;
        child_rows += c.rows;
    }
    if (const auto* s = std::get_if<op::Source>(&e.op)) {
        auto it = catalog.find(s->name);
        if (it == catalog.end()) fail(ErrorKind::estimation, "no statistics for source '" + s->name + "'");
        double rows = static_cast<double>(it->second.rows);
        return {rows, rows, it->second.grid};
    }
    if (std::holds_alternative<op::Merge>(e.op)) {
        std::optional<TimeGrid> grid = in.size() == 2 ? merged_grid(in[0].grid, in[1].grid) : in[0].grid;
        return {child_cost + child_rows, child_rows, grid};
    }
    if (const auto* c = std::get_if<op::Coarsen>(&e.op)) {
        double m = 1;
        const auto& g = in[0].grid;
        if (g && g->is_uniform() && c->width.unit == Width::Unit::days && c->width.amount % g->width() == 0) {
            m = static_cast<double>(c->width.amount / g->width());
        } else if (g && !g->is_uniform() && c->width.unit == Width::Unit::months) {
            m = static_cast<double>(c->width.amount);
        }
        return {child_cost + in[0].rows, std::ceil(in[0].rows / m), coarsened_grid(g, c->width)};
    }
    if (std::holds_alternative<op::Docs>(e.op)) return {0, 0, {}};
    Estimate out{child_cost + child_rows, in.empty() ? 0 : in[0].rows, in.empty() ? std::nullopt : in[0].grid};
    return out;
}

}  // namespace

double estimate_cost(const PlanExpr& e, const Catalog& catalog) { return estimate(e, catalog).cost; }

}  // namespace tth
