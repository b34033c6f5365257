#include "tth/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tth/error.hpp"

namespace tth {

// ---------------------------------------------------------------------------
// Rank view

std::vector<Interval> RankedTTH::intervals() const {
    std::vector<Interval> out;
    for (const auto& r : rows) {
        if (out.empty() || out.back() != r.interval) out.push_back(r.interval);
    }
    return out;
}

std::optional<std::int64_t> RankedTTH::rank_of(TermId term, Interval interval) const {
    for (const auto& r : rows) {
        if (r.interval == interval && r.term == term) return r.rank;
    }
    return std::nullopt;
}

namespace {

std::vector<TermId> resolve_terms(const TTH& tth, const std::vector<std::string>& terms) {
    std::vector<TermId> ids;
    for (const auto& t : terms) ids.push_back(tth.vocabulary()->lookup(t));
    return ids;
}

// Rows grouped by interval, each group ordered by count descending then term id.
std::map<Interval, std::vector<const TTHRow*>> ranked_by_interval(const TTH& tth) {
    std::map<Interval, std::vector<const TTHRow*>> out;
    for (const auto& r : tth.rows()) out[r.interval].push_back(&r);
    for (auto& [i, rows] : out) {
        std::stable_sort(rows.begin(), rows.end(), [](const TTHRow* a, const TTHRow* b) {
            if (a->count != b->count) return a->count > b->count;
            return a->term < b->term;
        });
    }
    return out;
}

}  // namespace

RankedTTH rank_view(const TTH& tth, Width week, Count ct, const std::vector<std::string>& terms) {
    if (terms.empty()) fail(ErrorKind::argument, "rank view needs at least one query term");
    std::vector<TermId> query = resolve_terms(tth, terms);
    TTH weekly = coarsen(rollup(tth), week);
    std::vector<TTHRow> kept;
    for (const auto& r : weekly.rows()) {
        if (r.count > ct) kept.push_back(r);
    }
    TTH filtered = weekly.with_rows(std::move(kept));
    RankedTTH out{filtered.grid(), filtered.vocabulary(), {}};
    for (const auto& [interval, rows] : ranked_by_interval(filtered)) {
        bool all_present = std::all_of(query.begin(), query.end(), [&](TermId t) {
            return std::any_of(rows.begin(), rows.end(), [&](const TTHRow* r) { return r->term == t; });
        });
        if (!all_present) continue;
        std::int64_t rank = 0;
        for (const auto* r : rows) out.rows.push_back({r->term, interval, ++rank, r->count});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Slopes

namespace {

std::optional<SlopeResult> max_rise(Interval first, Interval last, const std::map<Interval, Count>& counts) {
    if (last - first < 1) return std::nullopt;
    auto at = [&](Interval i) {
        auto it = counts.find(i);
        return it == counts.end() ? Count{0} : it->second;
    };
    SlopeResult best{static_cast<double>(at(first + 1) - at(first)), first};
    for (Interval i = first + 1; i < last; ++i) {
        double s = static_cast<double>(at(i + 1) - at(i));
        if (s > best.max_slope) best = {s, i};
    }
    return best;
}

}  // namespace

SlopeResult find_max_slope(const std::vector<std::pair<Interval, Count>>& series) {
    if (series.empty()) fail(ErrorKind::argument, "slope needs at least two intervals");
    std::map<Interval, Count> counts;
    for (const auto& [i, c] : series) counts[i] += c;
    auto best = max_rise(counts.begin()->first, counts.rbegin()->first, counts);
    if (!best) fail(ErrorKind::argument, "slope needs at least two intervals");
    return *best;
}

// ---------------------------------------------------------------------------
// TF-IDF

IntervalTotals document_totals(const CorpusIndex& index, const TimeGrid& grid) {
    IntervalTotals out;
    for (const auto& d : index.documents) {
        if (auto i = grid.interval_of(d.date)) ++out[*i];
    }
    return out;
}

std::vector<TfIdfRow> tf_idf(const TTH& tth, std::int64_t k, const std::optional<IntervalTotals>& totals) {
    if (k <= 0) fail(ErrorKind::argument, "tf-idf needs k >= 1, got " + std::to_string(k));
    TTH rolled = rollup(tth);
    std::map<Interval, std::vector<TfIdfRow>> per_interval;
    std::map<Interval, DocList> docs;
    for (const auto& r : rolled.rows()) docs[r.interval] = union_docs(docs[r.interval], r.docs);
    for (const auto& r : rolled.rows()) {
        std::int64_t n = static_cast<std::int64_t>(docs[r.interval].size());
        if (totals) {
            auto it = totals->find(r.interval);
            if (it != totals->end()) n = it->second;
        }
        const auto df = static_cast<std::int64_t>(r.docs.size());
        if (n < df) {
            fail(ErrorKind::contract, "interval " + std::to_string(r.interval) + " has " + std::to_string(n) +
                                          " documents but a term occurs in " + std::to_string(df));
        }
        double score = df == n ? 0.0
                               : static_cast<double>(r.count) *
                                     std::log(static_cast<double>(n) / static_cast<double>(df));
        per_interval[r.interval].push_back({0, r.term, r.interval, score, r.count, df, n});
    }
    std::vector<TfIdfRow> out;
    for (auto& [interval, rows] : per_interval) {
        std::sort(rows.begin(), rows.end(), [](const TfIdfRow& a, const TfIdfRow& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.term < b.term;
        });
        if (static_cast<std::int64_t>(rows.size()) > k) rows.resize(static_cast<std::size_t>(k));
        std::int64_t rank = 0;
        for (auto& r : rows) {
            r.rank = ++rank;
            out.push_back(r);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Co-occurring topics

std::vector<CooccurrenceResult> topic_cooccurrence(const TTH& tth, const std::string& anchor,
                                                   const CooccurrenceOptions& options) {
    const TermId anchor_id = tth.vocabulary()->lookup(anchor);
    std::vector<std::string> keep;
    if (options.group_by) keep.push_back(*options.group_by);
    PartitionedTTH parts = group(rollup(tth, keep), keep);
    std::vector<CooccurrenceResult> out;
    for (const auto& [key, part] : parts.parts) {
        TTH coarse = coarsen(part, Width::days(options.window_days));
        SortedTTH strongest = top(sort_by_axis(select(coarse, Predicate::term_is(anchor)), SortAxis::count, SortOrder::desc),
                                  options.top_intervals);
        if (strongest.order.empty()) continue;
        CooccurrenceResult result;
        result.group = key;
        result.grid = coarse.grid();
        for (const auto& r : strongest.ordered_rows()) result.intervals.push_back(r.interval);
        Marginal1D totals = collapse(select(coarse, Predicate::interval_in(result.intervals)), Axis::ts);
        std::vector<MarginalRow> ranked = totals.rows;
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const MarginalRow& a, const MarginalRow& b) { return a.count > b.count; });
        if (ranked.size() > options.k + 1) ranked.resize(options.k + 1);
        for (const auto& r : ranked) {
            if (static_cast<TermId>(r.value) == anchor_id || result.terms.size() >= options.k) continue;
            result.terms.push_back(tth.term_string(static_cast<TermId>(r.value)));
            result.counts.push_back(r.count);
        }
        out.push_back(std::move(result));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Salience

SalienceResult salience(const TTH& tth, const std::vector<std::string>& terms, const SalienceOptions& options) {
    SalienceResult out;
    out.view = rank_view(tth, options.week, options.ct, terms);
    std::vector<TermId> query = resolve_terms(tth, terms);
    for (Interval week : out.view.intervals()) {
        WeekRankSum w{week, 0, {}};
        for (TermId t : query) {
            std::int64_t r = *out.view.rank_of(t, week);
            w.ranks.push_back(r);
            w.rank_sum += r;
        }
        out.weeks.push_back(std::move(w));
    }
    if (out.weeks.size() < 2) {
        fail(ErrorKind::insufficient_data, "salience needs at least two weeks in which all query terms occur, found " +
                                               std::to_string(out.weeks.size()));
    }
    const WeekRankSum* best = &out.weeks.front();
    for (const auto& w : out.weeks) {
        if (w.rank_sum < best->rank_sum) best = &w;
    }
    out.extremal = best->interval;
    std::vector<double> x(best->ranks.begin(), best->ranks.end());
    out.salient = true;
    for (const auto& w : out.weeks) {
        if (w.interval == best->interval) continue;
        std::vector<double> y(w.ranks.begin(), w.ranks.end());
        WeekComparison c{w.interval, mann_whitney_u(x, y, Alternative::less), false};
        c.significant = c.test.p_value <= options.alpha;
        out.salient = out.salient && c.significant;
        out.comparisons.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trendy terms

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Intervals of `grid` whose start lies in (after, upto].
std::optional<std::pair<Interval, Interval>> window_of(const TimeGrid& grid, Date after, Date upto) {
    if (grid.is_uniform()) {
        const std::int64_t w = grid.width();
        Interval lo = floor_div(after - grid.origin(), w) + 1;
        Interval hi = floor_div(upto - grid.origin(), w);
        if (lo > hi) return std::nullopt;
        return std::pair{lo, hi};
    }
    std::optional<Interval> lo, hi;
    const auto& b = grid.boundaries();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        if (b[i] > after && b[i] <= upto) {
            if (!lo) lo = static_cast<Interval>(i);
            hi = static_cast<Interval>(i);
        }
    }
    if (!lo) return std::nullopt;
    return std::pair{*lo, *hi};
}

}  // namespace

std::vector<TrendyTerm> trendy_terms(const TTH& tth, const TrendyOptions& options) {
    TTH rolled = rollup(tth);
    auto window = window_of(rolled.grid(), options.today.add_months(-options.months), options.today);
    if (!window) return {};
    const auto [lo, hi] = *window;
    TTH in_window = select(rolled, Predicate::interval(CmpOp::ge, lo) && Predicate::interval(CmpOp::le, hi));
    if (in_window.empty()) return {};
    const double avg = static_cast<double>(in_window.total_count()) / static_cast<double>(in_window.size());
    std::set<TermId> qualifying;
    for (const auto& r : in_window.rows()) {
        if (static_cast<double>(r.count) > avg) qualifying.insert(r.term);
    }
    std::vector<TTHRow> rows;
    for (const auto& r : in_window.rows()) {
        if (qualifying.contains(r.term)) rows.push_back(r);
    }
    TTH series = in_window.with_rows(std::move(rows));
    Interval first = lo;
    Interval last = hi;
    if (options.coarsen) {
        TTH coarse = coarsen(series, *options.coarsen);
        first = *coarse.grid().interval_of(series.grid().interval_start(lo));
        last = *coarse.grid().interval_of(series.grid().interval_start(hi));
        series = std::move(coarse);
    }
    std::map<TermId, std::map<Interval, Count>> counts;
    for (const auto& r : series.rows()) counts[r.term][r.interval] = r.count;
    std::vector<TrendyTerm> out;
    for (const auto& [term, by_interval] : counts) {
        auto best = max_rise(first, last, by_interval);
        if (!best || !(best->max_slope > options.theta)) continue;
        TrendyTerm t;
        t.term = term;
        t.text = tth.term_string(term);
        t.slope = best->max_slope;
        t.interval = best->from + 1;
        t.grid = series.grid();
        if (const TTHRow* row = series.find(RowKey{term, t.interval, {}})) t.docs = row->docs;
        out.push_back(std::move(t));
    }
    std::stable_sort(out.begin(), out.end(), [](const TrendyTerm& a, const TrendyTerm& b) { return a.slope > b.slope; });
    return out;
}

// ---------------------------------------------------------------------------
// Synchronized topics

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<SyncGroup> synchronized_topics(const TTH& tth, const SyncOptions& options) {
    if (options.k == 0) fail(ErrorKind::argument, "synchronized topics needs k >= 1");
    if (options.min_jaccard <= 0 || options.min_jaccard > 1) {
        fail(ErrorKind::argument, "Jaccard threshold must be in (0, 1]");
    }
    TTH rolled = rollup(tth, {options.group_by});
    // interval -> member -> rows
    std::map<Interval, std::map<std::string, std::vector<const TTHRow*>>> cells;
    for (const auto& r : rolled.rows()) cells[r.interval][r.aux[0]].push_back(&r);
    std::vector<SyncGroup> out;
    for (auto& [interval, members] : cells) {
        std::vector<std::string> names;
        std::vector<std::set<TermId>> sets;
        for (auto& [member, rows] : members) {
            std::stable_sort(rows.begin(), rows.end(), [](const TTHRow* a, const TTHRow* b) {
                if (a->count != b->count) return a->count > b->count;
                return a->term < b->term;
            });
            std::set<TermId> top;
            for (std::size_t i = 0; i < rows.size() && i < options.k; ++i) top.insert(rows[i]->term);
            names.push_back(member);
            sets.push_back(std::move(top));
        }
        DisjointSets components(names.size());
        for (std::size_t a = 0; a < names.size(); ++a) {
            for (std::size_t b = a + 1; b < names.size(); ++b) {
                std::vector<TermId> common;
                std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                                      std::back_inserter(common));
                double uni = static_cast<double>(sets[a].size() + sets[b].size() - common.size());
                double jaccard = uni == 0 ? 1.0 : static_cast<double>(common.size()) / uni;
                bool linked = options.min_jaccard >= 1.0 ? sets[a] == sets[b] : jaccard >= options.min_jaccard;
                if (linked) components.unite(a, b);
            }
        }
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < names.size(); ++i) groups[components.find(i)].push_back(i);
        std::vector<SyncGroup> found;
        for (const auto& [root, idx] : groups) {
            if (idx.size() < 2) continue;
            SyncGroup g;
            g.interval = interval;
            std::set<TermId> shared = sets[idx.front()];
            for (auto i : idx) {
                g.members.push_back(names[i]);
                std::set<TermId> next;
                std::set_intersection(shared.begin(), shared.end(), sets[i].begin(), sets[i].end(),
                                      std::inserter(next, next.end()));
                shared = std::move(next);
            }
            for (TermId t : shared) g.terms.push_back(tth.term_string(t));
            std::sort(g.terms.begin(), g.terms.end());
            found.push_back(std::move(g));
        }
        std::sort(found.begin(), found.end(),
                  [](const SyncGroup& a, const SyncGroup& b) { return a.members < b.members; });
        for (auto& g : found) out.push_back(std::move(g));
    }
    return out;
}

}  // namespace tth
