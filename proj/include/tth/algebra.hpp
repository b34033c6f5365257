#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tth/predicate.hpp"
#include "tth/tth.hpp"

namespace tth {

// ---------------------------------------------------------------------------
// Document lists

enum class IndexOpKind { intersect, unite, difference };

std::string_view to_string(IndexOpKind op) noexcept;
std::optional<IndexOpKind> index_op_from_string(std::string_view s);

DocList union_docs(const DocList& a, const DocList& b);
DocList intersect_docs(const DocList& a, const DocList& b);
DocList difference_docs(const DocList& a, const DocList& b);

/// Set operation on two sorted duplicate-free lists; contract error otherwise.
DocList index_op(IndexOpKind op, const DocList& a, const DocList& b);

// ---------------------------------------------------------------------------
// Row-level operators

TTH select(const TTH& tth, const Predicate& predicate);

/// Granularity of a coarsen target: whole days on uniform grids, calendar months on
/// explicit (month-boundary) grids.
struct Width {
    enum class Unit { days, months };
    std::int64_t amount = 1;
    Unit unit = Unit::days;

    static Width days(std::int64_t n) { return Width{n, Unit::days}; }
    static Width months(std::int64_t n) { return Width{n, Unit::months}; }
    bool operator==(const Width&) const = default;
};

std::string describe(const Width& width);

/// Re-bins onto a coarser grid. Uniform grids: `width` must be a whole multiple of the
/// current width; the new grid keeps the origin. Explicit grids: `width` in months and
/// every boundary of the coarser calendar grid must be a current boundary.
/// `start`/`end` (end exclusive) must be boundaries of the new grid; only rows inside the
/// window are kept. Misalignment raises alignment errors.
TTH coarsen(const TTH& tth, Width width, std::optional<Date> start = {}, std::optional<Date> end = {});

/// Re-bins onto an arbitrary target grid. Every stored interval must lie inside one
/// target interval (partial overlap is an alignment error); intervals wholly outside an
/// explicit target's span are dropped.
TTH coarsen_to(const TTH& tth, const TimeGrid& target);

/// Brings two histograms onto a common grid: equal grids pass through; uniform grids of
/// equal width whose origins differ by whole intervals are rebased to the earlier
/// origin. Anything else is an alignment error.
std::pair<TTH, TTH> align(const TTH& a, const TTH& b);

/// Key-wise union. Shared keys union their documents and count each shared document's
/// occurrences once (needs a forward index when document lists overlap).
TTH merge(const TTH& a, const TTH& b);

/// Drops aux columns not in `keep` and combines rows that become equal.
TTH rollup(const TTH& tth, const std::vector<std::string>& keep = {});

// ---------------------------------------------------------------------------
// Relations

using Cell = std::variant<std::int64_t, std::string, DocList>;

struct Relation {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool operator==(const Relation&) const = default;
};

std::string format_cell(const Cell& cell);

/// Projectable attributes: term, ts, date (interval start), count, doc_ids, and aux
/// names. Schema error for anything else.
Relation project(const TTH& tth, const std::vector<std::string>& attrs, bool distinct = false);
/// Projection following an explicit row order (used by sorted views).
Relation project(const TTH& tth, const std::vector<std::size_t>& order, const std::vector<std::string>& attrs,
                 bool distinct);

// ---------------------------------------------------------------------------
// Grouping

struct PartitionedTTH {
    std::vector<std::string> group_schema;
    std::map<AuxValues, TTH> parts;  // only occurring value combinations
    TTH prototype;                   // empty histogram carrying the shared metadata

    bool operator==(const PartitionedTTH&) const = default;
};

PartitionedTTH group(const TTH& tth, const std::vector<std::string>& vars);
/// Merges all parts back into one histogram.
TTH flatten(const PartitionedTTH& parts);

// ---------------------------------------------------------------------------
// Ordering

enum class SortAxis { term, count };
enum class SortOrder { asc, desc };

/// A histogram with a presentation order over its rows.
struct SortedTTH {
    TTH tth;
    std::vector<std::size_t> order;  // indices into tth.rows()

    std::vector<TTHRow> ordered_rows() const;
    bool operator==(const SortedTTH&) const = default;
};

/// Ties: term id, interval, aux ascending.
SortedTTH sort_by_axis(const TTH& tth, SortAxis axis, SortOrder order);
/// First `k` rows in order.
SortedTTH top(const SortedTTH& sorted, std::size_t k);
/// Rows whose `attr` (term or ts) value is among the first `k` distinct values in order.
SortedTTH top_distinct(const SortedTTH& sorted, std::size_t k, const std::string& attr);

// ---------------------------------------------------------------------------
// Axes

enum class Axis { term, ts };

std::string_view to_string(Axis axis) noexcept;
std::optional<Axis> axis_from_string(std::string_view s);

struct MarginalRow {
    std::int64_t value = 0;  // term id or interval, depending on the retained axis
    Count count = 0;
    DocList docs;
    bool operator==(const MarginalRow&) const = default;
};

/// Histogram over a single axis; `axis` is the retained one.
struct Marginal1D {
    Axis axis = Axis::ts;
    std::vector<MarginalRow> rows;  // ascending value
    bool operator==(const Marginal1D&) const = default;
};

/// Sums out `removed` (and all aux attributes).
Marginal1D collapse(const TTH& tth, Axis removed);

struct AxisValues {
    Axis axis = Axis::ts;
    std::vector<Interval> intervals;  // axis == ts, ascending
    std::vector<std::string> terms;   // axis == term, ascending
    bool operator==(const AxisValues&) const = default;
};

AxisValues extract_axis(const TTH& tth, Axis axis);

/// (term, interval) pairs, ascending.
using KeySet = std::vector<std::pair<TermId, Interval>>;

/// Term/interval pairs whose documents intersect `docs`, optionally limited to
/// intervals starting within [start, end] (inclusive). Range error when start > end.
KeySet query_index(const TTH& tth, const DocList& docs, std::optional<Date> start = {},
                   std::optional<Date> end = {});

// ---------------------------------------------------------------------------
// Distances

enum class Metric { euclidean, kl };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> metric_from_string(std::string_view s);

inline constexpr double kKlSmoothing = 1e-9;

/// Euclidean distance over the union of keys, or KL(a || b) of the normalized, smoothed
/// count distributions. Grids must align as for merge.
double distance(const TTH& a, const TTH& b, Metric metric);

}  // namespace tth
