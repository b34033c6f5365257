#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tth/algebra.hpp"
#include "tth/functions.hpp"

namespace tth {

namespace op {

struct Source {
    std::string name;
    bool operator==(const Source&) const = default;
};
struct Select {
    Predicate predicate;
    bool operator==(const Select&) const = default;
};
struct Project {
    std::vector<std::string> attrs;
    bool distinct = false;
    bool operator==(const Project&) const = default;
};
struct Coarsen {
    Width width;
    std::optional<Date> start;
    std::optional<Date> end;
    bool operator==(const Coarsen&) const = default;
};
/// Binary: merge two histograms. Unary on a partitioned histogram: merge its parts.
struct Merge {
    bool operator==(const Merge&) const = default;
};
struct Group {
    std::vector<std::string> vars;
    bool operator==(const Group&) const = default;
};
struct Apply {
    FunctionCall fn;
    bool operator==(const Apply&) const = default;
};
struct ApplyArg {
    FunctionCall fn;
    bool operator==(const ApplyArg&) const = default;
};
struct Sort {
    SortAxis axis = SortAxis::count;
    SortOrder order = SortOrder::desc;
    bool operator==(const Sort&) const = default;
};
struct Top {
    std::size_t k = 1;
    std::optional<std::string> distinct;  // "term" or "ts"
    bool operator==(const Top&) const = default;
};
/// Sums out `axis`.
struct Collapse {
    Axis axis = Axis::term;
    bool operator==(const Collapse&) const = default;
};
struct Distance {
    Metric metric = Metric::euclidean;
    bool operator==(const Distance&) const = default;
};
struct IndexOp {
    IndexOpKind kind = IndexOpKind::intersect;
    bool operator==(const IndexOp&) const = default;
};
/// Inputs: histogram, document list.
struct QueryIndex {
    std::optional<Date> start;
    std::optional<Date> end;
    bool operator==(const QueryIndex&) const = default;
};
struct ExtractAxis {
    Axis axis = Axis::ts;
    bool operator==(const ExtractAxis&) const = default;
};
/// Inputs: histogram, applyArg result. Yields the histogram restricted to the keys.
struct GetRecords {
    bool operator==(const GetRecords&) const = default;
};
/// Document list literal.
struct Docs {
    DocList docs;
    bool operator==(const Docs&) const = default;
};
/// Union of all document lists of a histogram or marginal.
struct DocsOf {
    bool operator==(const DocsOf&) const = default;
};

}  // namespace op

/// Query plan expression tree.
struct PlanExpr {
    using Op = std::variant<op::Source, op::Select, op::Project, op::Coarsen, op::Merge, op::Group, op::Apply,
                            op::ApplyArg, op::Sort, op::Top, op::Collapse, op::Distance, op::IndexOp, op::QueryIndex,
                            op::ExtractAxis, op::GetRecords, op::Docs, op::DocsOf>;

    Op op;
    std::vector<PlanExpr> inputs;

    std::size_t node_count() const;
    bool operator==(const PlanExpr&) const = default;
};

/// Operator name as written in plan text, e.g. "coarsen".
std::string op_name(const PlanExpr::Op& op);

namespace plan {

PlanExpr source(std::string name);
PlanExpr select(Predicate p, PlanExpr in);
PlanExpr project(std::vector<std::string> attrs, bool distinct, PlanExpr in);
PlanExpr coarsen(Width width, PlanExpr in, std::optional<Date> start = {}, std::optional<Date> end = {});
PlanExpr merge(PlanExpr a, PlanExpr b);
PlanExpr merge_parts(PlanExpr in);
PlanExpr group(std::vector<std::string> vars, PlanExpr in);
PlanExpr apply(FunctionCall fn, PlanExpr in);
PlanExpr apply_arg(FunctionCall fn, PlanExpr in);
PlanExpr sort(SortAxis axis, SortOrder order, PlanExpr in);
PlanExpr top(std::size_t k, PlanExpr in, std::optional<std::string> distinct = {});
PlanExpr collapse(Axis axis, PlanExpr in);
PlanExpr distance(Metric metric, PlanExpr a, PlanExpr b);
PlanExpr index_op(IndexOpKind kind, PlanExpr a, PlanExpr b);
PlanExpr query_index(PlanExpr tth, PlanExpr docs, std::optional<Date> start = {}, std::optional<Date> end = {});
PlanExpr extract_axis(Axis axis, PlanExpr in);
PlanExpr get_records(PlanExpr tth, PlanExpr args);
PlanExpr docs(DocList docs);
PlanExpr docs_of(PlanExpr in);

}  // namespace plan

// ---------------------------------------------------------------------------
// Text form

/// S-expression text, e.g. `(project distinct (ts) (select (= term "A") X))`.
/// See docs/plan-language.md for the grammar.
std::string to_text(const PlanExpr& e);
/// Syntax error on malformed text.
PlanExpr parse_plan(std::string_view text);

// ---------------------------------------------------------------------------
// Types

enum class ValueKind { tth, sorted, marginal, values, arg_values, axis, relation, doc_list, key_set, scalar };

std::string_view to_string(ValueKind kind) noexcept;

/// What the planner knows about a source histogram.
struct SourceInfo {
    TimeGrid grid;
    std::vector<std::string> aux_schema;
    std::size_t rows = 0;
};

using Catalog = std::map<std::string, SourceInfo>;

struct PlanType {
    ValueKind kind = ValueKind::tth;
    bool partitioned = false;
    std::optional<TimeGrid> grid;  // known grid of histogram-valued nodes

    bool operator==(const PlanType&) const = default;
};

/// Type error when operator arities or input kinds do not fit. Sources missing from a
/// non-empty catalog are lookup errors; with an empty catalog, grids are unknown.
PlanType check_types(const PlanExpr& e, const Catalog& catalog = {});

// ---------------------------------------------------------------------------
// Rewriting

struct RewriteTrace {
    PlanExpr expr;
    std::vector<std::string> applied;  // rule names, in application order
    std::size_t iterations = 0;
};

/// Rewrites to a fixed point with
///   R1 merge(X, merge(Y, Z))          -> merge(merge(X, Y), Z)
///   R2 coarsen(merge(X, Y), D)        -> merge(coarsen(X, D), coarsen(Y, D))
///        when X and Y have the same known grid
///   R3 coarsen(coarsen(X, D1), D2)    -> coarsen(X, D2)
///        when the inner coarsen has no window, widths are in days, D2 is a multiple
///        of D1 and D1 a multiple of X's known width.
/// Grids come from `catalog`; without it R2 and R3 never fire. Type-checks first.
PlanExpr rewrite(const PlanExpr& e, const Catalog& catalog = {});
RewriteTrace rewrite_traced(const PlanExpr& e, const Catalog& catalog = {});

/// Bottom-up cardinality cost. Estimation error when a source has no catalog entry.
double estimate_cost(const PlanExpr& e, const Catalog& catalog);

// ---------------------------------------------------------------------------
// Evaluation

using PlainValue = std::variant<TTH, SortedTTH, Marginal1D, std::vector<double>, ArgValues, AxisValues, Relation,
                                DocList, KeySet, double>;

ValueKind kind_of(const PlainValue& v);

/// Result of evaluating a plan: one plain value, or one per group when the plan
/// operates on a partitioned histogram.
struct Value {
    std::optional<std::vector<std::string>> group_schema;
    std::vector<std::pair<AuxValues, PlainValue>> parts;  // ascending group key
    std::optional<TTH> prototype;                         // partitioned histograms only

    // Rendering context for term ids and intervals; not part of the value.
    std::shared_ptr<const Vocabulary> vocabulary;
    std::optional<TimeGrid> grid;

    bool partitioned() const noexcept { return group_schema.has_value(); }
    /// The value of an unpartitioned result; contract error otherwise.
    const PlainValue& single() const;

    bool operator==(const Value& other) const {
        return group_schema == other.group_schema && parts == other.parts && prototype == other.prototype;
    }
};

using Environment = std::map<std::string, TTH>;

Catalog catalog_of(const Environment& env);

struct EvalStats {
    std::size_t max_intermediate_rows = 0;  // largest histogram produced by a non-source node
    std::size_t nodes_evaluated = 0;
};

/// Evaluates bottom-up. Operator errors carry the failing node's path, e.g.
/// "/merge/coarsen[0]". Unbound sources raise lookup errors.
Value evaluate(const PlanExpr& e, const Environment& env, EvalStats* stats = nullptr,
               const FunctionRegistry& registry = FunctionRegistry::builtins());

/// Flat tabular rendering of a value (used by the CLI and for result comparison).
Relation to_relation(const Value& v);

}  // namespace tth
