#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tth/algebra.hpp"
#include "tth/mann_whitney.hpp"

namespace tth {

// ---------------------------------------------------------------------------
// Rank view

struct RankedRow {
    TermId term = 0;
    Interval interval = 0;
    std::int64_t rank = 0;  // 1 = highest count
    Count count = 0;
    bool operator==(const RankedRow&) const = default;
};

/// Per-interval term ranks of a coarsened histogram.
struct RankedTTH {
    TimeGrid grid;
    std::shared_ptr<const Vocabulary> vocabulary;
    std::vector<RankedRow> rows;  // by interval, then rank

    std::vector<Interval> intervals() const;
    /// Rank of `term` in `interval`, if ranked there.
    std::optional<std::int64_t> rank_of(TermId term, Interval interval) const;
};

/// Coarsens to `week` (aux values summed out), keeps rows with count > `ct`, keeps only
/// intervals where every term of `terms` survived, and ranks each interval by count
/// descending with ties broken by term id. Empty `terms` is an argument error; unknown
/// terms are lookup errors.
RankedTTH rank_view(const TTH& tth, Width week, Count ct, const std::vector<std::string>& terms);

// ---------------------------------------------------------------------------
// Slopes

struct SlopeResult {
    double max_slope = 0;
    Interval from = 0;  // edge from -> from + 1
};

/// Largest increase between consecutive intervals of a series; missing intervals count
/// as 0. Ties go to the earliest edge. Fewer than two intervals is an argument error.
SlopeResult find_max_slope(const std::vector<std::pair<Interval, Count>>& series);

// ---------------------------------------------------------------------------
// TF-IDF

struct TfIdfRow {
    std::int64_t rank = 0;
    TermId term = 0;
    Interval interval = 0;
    double score = 0;
    Count count = 0;
    std::int64_t df = 0;
    std::int64_t documents = 0;  // documents in the interval
};

/// Document totals per interval, for intervals that have documents.
using IntervalTotals = std::map<Interval, std::int64_t>;

/// Number of documents per interval of `grid`.
IntervalTotals document_totals(const CorpusIndex& index, const TimeGrid& grid);

/// score = count * ln(N / df) with df the row's document count and N the interval's
/// document total (from `totals`, or else the number of distinct documents in the
/// interval). Aux values are summed out. Top `k` per interval, ties by term id.
std::vector<TfIdfRow> tf_idf(const TTH& tth, std::int64_t k, const std::optional<IntervalTotals>& totals = {});

// ---------------------------------------------------------------------------
// Co-occurring topics

struct CooccurrenceOptions {
    std::int64_t window_days = 5;
    std::size_t top_intervals = 20;
    std::size_t k = 10;
    std::optional<std::string> group_by;
};

struct CooccurrenceResult {
    AuxValues group;                 // empty without group_by
    std::vector<Interval> intervals;  // the anchor's strongest intervals, strongest first
    std::vector<std::string> terms;   // strongest companions, strongest first
    std::vector<Count> counts;        // companion totals over `intervals`
    TimeGrid grid;                    // grid of `intervals`
};

/// Two phases: the anchor's `top_intervals` highest-count intervals at `window_days`
/// granularity, then the top k + 1 terms by total count over those intervals with the
/// anchor removed (k kept). Per group when `group_by` is set. Unknown anchors are lookup
/// errors; an anchor that never occurs gives no results.
std::vector<CooccurrenceResult> topic_cooccurrence(const TTH& tth, const std::string& anchor,
                                                   const CooccurrenceOptions& options);

// ---------------------------------------------------------------------------
// Salience

struct WeekRankSum {
    Interval interval = 0;
    std::int64_t rank_sum = 0;
    std::vector<std::int64_t> ranks;  // ranks of the query terms, in query order
};

struct WeekComparison {
    Interval interval = 0;
    UTestResult test;
    bool significant = false;
};

struct SalienceResult {
    RankedTTH view;
    std::vector<WeekRankSum> weeks;  // qualifying weeks, ascending
    Interval extremal = 0;           // minimum rank sum (ties: earliest)
    std::vector<WeekComparison> comparisons;
    bool salient = false;            // significant against every other week
};

struct SalienceOptions {
    Width week = Width::days(7);
    Count ct = 0;
    double alpha = 0.05;
};

/// Ranks per week, picks the week where the query terms rank best (smallest rank sum)
/// and tests its rank vector against every other qualifying week with a one-sided
/// rank-sum test. Fewer than two qualifying weeks raise insufficient-data errors.
SalienceResult salience(const TTH& tth, const std::vector<std::string>& terms, const SalienceOptions& options);

// ---------------------------------------------------------------------------
// Trendy terms

struct TrendyOptions {
    Date today;
    int months = 6;
    double theta = 0;
    std::optional<Width> coarsen;  // re-bin the window before measuring slopes
};

struct TrendyTerm {
    TermId term = 0;
    std::string text;
    double slope = 0;
    Interval interval = 0;  // upper end of the steepest edge
    DocList docs;           // documents of that row
    TimeGrid grid;
};

/// Window = intervals starting after today - months and no later than today. A term
/// qualifies when one of its window rows exceeds the mean count of all window rows;
/// its steepest zero-filled rise over the window must exceed theta. Sorted by slope
/// descending, then term id.
std::vector<TrendyTerm> trendy_terms(const TTH& tth, const TrendyOptions& options);

// ---------------------------------------------------------------------------
// Synchronized topics

struct SyncGroup {
    Interval interval = 0;
    std::vector<std::string> members;  // values of the grouping attribute, ascending
    std::vector<std::string> terms;    // the shared top-k terms (intersection), ascending
};

struct SyncOptions {
    std::string group_by = "newspaper";
    std::size_t k = 5;
    double min_jaccard = 1.0;  // 1 = identical top-k sets
};

/// For each interval, each group's top-k term set (count descending, ties by term id);
/// reports maximal sets of >= 2 groups whose top-k sets are identical, or with
/// min_jaccard < 1, connected by pairwise Jaccard similarity >= min_jaccard.
std::vector<SyncGroup> synchronized_topics(const TTH& tth, const SyncOptions& options);

}  // namespace tth
