#include "tth/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "tth/error.hpp"

namespace tth {

// ---------------------------------------------------------------------------
// Document lists

std::string_view to_string(IndexOpKind op) noexcept {
    switch (op) {
        case IndexOpKind::intersect: return "intersect";
        case IndexOpKind::unite: return "union";
        case IndexOpKind::difference: return "difference";
    }
    return "?";
}

std::optional<IndexOpKind> index_op_from_string(std::string_view s) {
    if (s == "intersect") return IndexOpKind::intersect;
    if (s == "union") return IndexOpKind::unite;
    if (s == "difference") return IndexOpKind::difference;
    return std::nullopt;
}

DocList union_docs(const DocList& a, const DocList& b) {
    DocList out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

DocList intersect_docs(const DocList& a, const DocList& b) {
    DocList out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

DocList difference_docs(const DocList& a, const DocList& b) {
    DocList out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

namespace {

void require_sorted_unique(const DocList& docs, const char* which) {
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (docs[i - 1] >= docs[i]) {
            fail(ErrorKind::contract, std::string(which) + " document list is not sorted and duplicate-free at position " +
                                          std::to_string(i));
        }
    }
}

}  // namespace

DocList index_op(IndexOpKind op, const DocList& a, const DocList& b) {
    require_sorted_unique(a, "first");
    require_sorted_unique(b, "second");
    switch (op) {
        case IndexOpKind::intersect: return intersect_docs(a, b);
        case IndexOpKind::unite: return union_docs(a, b);
        case IndexOpKind::difference: return difference_docs(a, b);
    }
    return {};
}

// ---------------------------------------------------------------------------
// select

TTH select(const TTH& tth, const Predicate& predicate) {
    CompiledPredicate test(predicate, tth);
    std::vector<TTHRow> rows;
    for (const auto& r : tth.rows()) {
        if (test(r)) rows.push_back(r);
    }
    return tth.with_rows(std::move(rows));
}

// ---------------------------------------------------------------------------
// coarsen

std::string describe(const Width& width) {
    return std::to_string(width.amount) + (width.unit == Width::Unit::days ? " day(s)" : " month(s)");
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Combines a run of rows that share term and interval but may differ in aux values.
void emit_combined(std::vector<TTHRow>& run, std::vector<TTHRow>& out) {
    if (run.size() > 1) {
        std::sort(run.begin(), run.end(), [](const TTHRow& a, const TTHRow& b) { return a.aux < b.aux; });
    }
    for (std::size_t i = 0; i < run.size();) {
        TTHRow acc = std::move(run[i]);
        std::size_t j = i + 1;
        for (; j < run.size() && run[j].aux == acc.aux; ++j) {
            acc.count += run[j].count;
            acc.docs = union_docs(acc.docs, run[j].docs);
        }
        out.push_back(std::move(acc));
        i = j;
    }
    run.clear();
}

// Regroups rows by a monotone interval map: rows arrive in key order and map(interval)
// is non-decreasing in interval, so each output (term, interval) is a contiguous run.
template <typename Map>
std::vector<TTHRow> regroup(const std::vector<TTHRow>& rows, Map&& map) {
    std::vector<TTHRow> out;
    out.reserve(rows.size());
    std::vector<TTHRow> run;
    TermId term = 0;
    Interval current = 0;
    for (const auto& r : rows) {
        std::optional<Interval> target = map(r.interval);
        if (!target) continue;
        if (!run.empty() && (r.term != term || *target != current)) {
            emit_combined(run, out);
        }
        term = r.term;
        current = *target;
        TTHRow moved = r;
        moved.interval = *target;
        run.push_back(std::move(moved));
    }
    if (!run.empty()) emit_combined(run, out);
    return out;
}

}  // namespace

TTH coarsen(const TTH& tth, Width width, std::optional<Date> start, std::optional<Date> end) {
    if (width.amount <= 0) {
        fail(ErrorKind::argument, "coarsen width must be positive, got " + std::to_string(width.amount));
    }
    if (start && end && *start > *end) {
        fail(ErrorKind::range, "coarsen window start " + format_date(*start) + " is after end " + format_date(*end));
    }
    const TimeGrid& grid = tth.grid();
    TimeGrid target;
    if (grid.is_uniform()) {
        if (width.unit != Width::Unit::days) {
            fail(ErrorKind::alignment, "cannot coarsen " + grid.describe() + " to " + describe(width) +
                                           ": calendar months need an explicit month grid");
        }
        if (width.amount % grid.width() != 0) {
            fail(ErrorKind::alignment, "new width " + describe(width) + " is not a multiple of the current width " +
                                           std::to_string(grid.width()) + " day(s)");
        }
        target = TimeGrid::uniform(grid.origin(), width.amount);
    } else {
        if (width.unit != Width::Unit::months) {
            fail(ErrorKind::alignment, "cannot coarsen " + grid.describe() + " by " + describe(width) +
                                           "; explicit grids coarsen by whole months");
        }
        target = TimeGrid::calendar_months(grid.boundaries().front(), grid.boundaries().back(),
                                           static_cast<int>(width.amount));
        for (Date b : target.boundaries()) {
            if (!grid.is_boundary(b)) {
                fail(ErrorKind::alignment, "coarser boundary " + format_date(b) + " is not a boundary of " +
                                               grid.describe());
            }
        }
    }
    for (const auto& [bound, name] : {std::pair{start, "start"}, std::pair{end, "end"}}) {
        if (bound && !target.is_boundary(*bound)) {
            fail(ErrorKind::alignment, std::string("coarsen window ") + name + " " + format_date(*bound) +
                                           " is not a boundary of " + target.describe());
        }
    }
    if (!grid.is_uniform()) {
        TTH out = coarsen_to(tth, target);
        if (!start && !end) return out;
        std::vector<TTHRow> rows;
        for (const auto& r : out.rows()) {
            Date s = target.interval_start(r.interval);
            if ((!start || s >= *start) && (!end || s < *end)) rows.push_back(r);
        }
        return out.with_rows(std::move(rows));
    }
    const std::int64_t m = width.amount / grid.width();
    std::optional<Interval> lo, hi;  // inclusive range of new intervals
    if (start) lo = *target.interval_of(*start);
    if (end) hi = *target.interval_of(*end) - 1;
    auto map = [&](Interval i) -> std::optional<Interval> {
        Interval t = floor_div(i, m);
        if ((lo && t < *lo) || (hi && t > *hi)) return std::nullopt;
        return t;
    };
    return tth.with_grid(target, m == 1 && !lo && !hi ? tth.rows() : regroup(tth.rows(), map));
}

TTH coarsen_to(const TTH& tth, const TimeGrid& target) {
    const TimeGrid& grid = tth.grid();
    std::unordered_map<Interval, std::optional<Interval>> cache;
    auto map = [&](Interval i) -> std::optional<Interval> {
        if (auto it = cache.find(i); it != cache.end()) return it->second;
        Date s = grid.interval_start(i);
        Date e = grid.interval_end(i);
        std::optional<Interval> t = target.interval_of(s);
        if (!t) {
            const auto& b = target.boundaries();
            if (!b.empty() && (e <= b.front() || s >= b.back())) {
                cache.emplace(i, std::nullopt);
                return std::nullopt;
            }
            fail(ErrorKind::alignment, "interval [" + format_date(s) + ", " + format_date(e) +
                                           ") straddles the edge of " + target.describe());
        }
        if (target.interval_start(*t) > s || target.interval_end(*t) < e) {
            fail(ErrorKind::alignment, "interval [" + format_date(s) + ", " + format_date(e) +
                                           ") partially overlaps target interval [" +
                                           format_date(target.interval_start(*t)) + ", " +
                                           format_date(target.interval_end(*t)) + ")");
        }
        cache.emplace(i, t);
        return t;
    };
    return tth.with_grid(target, regroup(tth.rows(), map));
}

// ---------------------------------------------------------------------------
// merge

namespace {

void require_same_schema(const TTH& a, const TTH& b) {
    if (a.aux_schema() != b.aux_schema()) {
        fail(ErrorKind::schema, "aux schemas differ");
    }
    if (a.vocabulary() != b.vocabulary() && !(*a.vocabulary() == *b.vocabulary())) {
        fail(ErrorKind::schema, "histograms use different vocabularies");
    }
}

TTH rebase(const TTH& tth, Date origin) {
    const TimeGrid& g = tth.grid();
    Interval shift = (g.origin() - origin) / g.width();
    std::vector<TTHRow> rows = tth.rows();
    for (auto& r : rows) r.interval += shift;
    return tth.with_grid(TimeGrid::uniform(origin, g.width()), std::move(rows));
}

}  // namespace

std::pair<TTH, TTH> align(const TTH& a, const TTH& b) {
    const TimeGrid& ga = a.grid();
    const TimeGrid& gb = b.grid();
    if (ga == gb) return {a, b};
    if (ga.is_uniform() && gb.is_uniform() && ga.width() == gb.width() &&
        (ga.origin() - gb.origin()) % ga.width() == 0) {
        Date origin = std::min(ga.origin(), gb.origin());
        return {ga.origin() == origin ? a : rebase(a, origin), gb.origin() == origin ? b : rebase(b, origin)};
    }
    fail(ErrorKind::alignment, "histograms are not temporally aligned: " + ga.describe() + " vs " + gb.describe());
}

TTH merge(const TTH& a_in, const TTH& b_in) {
    require_same_schema(a_in, b_in);
    auto [a, b] = align(a_in, b_in);
    const auto& forward = a.forward() ? a.forward() : b.forward();
    const auto& ra = a.rows();
    const auto& rb = b.rows();
    std::vector<TTHRow> out;
    out.reserve(ra.size() + rb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ra.size() && j < rb.size()) {
        int c = compare_keys(ra[i], rb[j]);
        if (c < 0) {
            out.push_back(ra[i++]);
        } else if (c > 0) {
            out.push_back(rb[j++]);
        } else {
            TTHRow row = ra[i];
            const TTHRow& other = rb[j];
            Count shared = 0;
            DocList common = intersect_docs(row.docs, other.docs);
            if (!common.empty()) {
                if (!forward) {
                    fail(ErrorKind::dependency, "merging overlapping document lists of " + describe_key(a, row.key()) +
                                                    " needs a forward index");
                }
                for (DocId d : common) shared += forward->frequency(row.term, d);
            }
            row.count = row.count + other.count - shared;
            row.docs = union_docs(row.docs, other.docs);
            out.push_back(std::move(row));
            ++i;
            ++j;
        }
    }
    for (; i < ra.size(); ++i) out.push_back(ra[i]);
    for (; j < rb.size(); ++j) out.push_back(rb[j]);
    TTH result = a.with_rows(std::move(out));
    if (!a.forward() && b.forward()) {
        return TTH::from_rows(result.grid(), result.aux_schema(), result.vocabulary(), result.rows(), b.forward(),
                              result.field());
    }
    return result;
}

TTH rollup(const TTH& tth, const std::vector<std::string>& keep) {
    std::vector<std::size_t> positions;
    for (const auto& name : keep) positions.push_back(tth.aux_position(name));
    if (positions.size() == tth.aux_schema().size()) {
        bool identity = true;
        for (std::size_t i = 0; i < positions.size(); ++i) identity = identity && positions[i] == i;
        if (identity) return tth;
    }
    std::vector<TTHRow> projected;
    projected.reserve(tth.size());
    for (const auto& r : tth.rows()) {
        TTHRow p = r;
        p.aux.clear();
        for (auto pos : positions) p.aux.push_back(r.aux[pos]);
        projected.push_back(std::move(p));
    }
    auto identity = [](Interval i) -> std::optional<Interval> { return i; };
    TTH base = TTH(tth.grid(), keep, tth.vocabulary(), tth.forward(), tth.field());
    return base.with_rows(regroup(projected, identity));
}

// ---------------------------------------------------------------------------
// project

std::string format_cell(const Cell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    const auto& docs = std::get<DocList>(cell);
    std::string out = "[";
    for (std::size_t i = 0; i < docs.size(); ++i) out += (i ? "," : "") + std::to_string(docs[i]);
    return out + "]";
}

Relation project(const TTH& tth, const std::vector<std::size_t>& order, const std::vector<std::string>& attrs,
                 bool distinct) {
    enum class Col { term, ts, date, count, docs, aux };
    std::vector<std::pair<Col, std::size_t>> cols;
    for (const auto& a : attrs) {
        if (a == "term") cols.emplace_back(Col::term, 0);
        else if (a == "ts") cols.emplace_back(Col::ts, 0);
        else if (a == "date") cols.emplace_back(Col::date, 0);
        else if (a == "count") cols.emplace_back(Col::count, 0);
        else if (a == "doc_ids") cols.emplace_back(Col::docs, 0);
        else cols.emplace_back(Col::aux, tth.aux_position(a));
    }
    Relation rel;
    rel.columns = attrs;
    std::set<std::vector<Cell>> seen;
    for (std::size_t idx : order) {
        const TTHRow& r = tth.rows()[idx];
        std::vector<Cell> row;
        row.reserve(cols.size());
        for (const auto& [col, pos] : cols) {
            switch (col) {
                case Col::term: row.emplace_back(tth.term_string(r.term)); break;
                case Col::ts: row.emplace_back(std::int64_t{r.interval}); break;
                case Col::date: row.emplace_back(format_date(tth.grid().interval_start(r.interval))); break;
                case Col::count: row.emplace_back(std::int64_t{r.count}); break;
                case Col::docs: row.emplace_back(r.docs); break;
                case Col::aux: row.emplace_back(r.aux[pos]); break;
            }
        }
        if (distinct && !seen.insert(row).second) continue;
        rel.rows.push_back(std::move(row));
    }
    return rel;
}

Relation project(const TTH& tth, const std::vector<std::string>& attrs, bool distinct) {
    std::vector<std::size_t> order(tth.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    return project(tth, order, attrs, distinct);
}

// ---------------------------------------------------------------------------
// group

PartitionedTTH group(const TTH& tth, const std::vector<std::string>& vars) {
    std::vector<std::size_t> positions;
    for (const auto& v : vars) positions.push_back(tth.aux_position(v));
    std::map<AuxValues, std::vector<TTHRow>> buckets;
    for (const auto& r : tth.rows()) {
        AuxValues key;
        for (auto p : positions) key.push_back(r.aux[p]);
        buckets[key].push_back(r);
    }
    PartitionedTTH out;
    out.group_schema = vars;
    out.prototype = tth.empty_like();
    if (vars.empty()) {
        out.parts.emplace(AuxValues{}, tth);
        return out;
    }
    for (auto& [key, rows] : buckets) out.parts.emplace(key, tth.with_rows(std::move(rows)));
    return out;
}

TTH flatten(const PartitionedTTH& parts) {
    TTH acc = parts.prototype;
    for (const auto& [key, part] : parts.parts) acc = merge(acc, part);
    return acc;
}

// ---------------------------------------------------------------------------
// ordering

std::vector<TTHRow> SortedTTH::ordered_rows() const {
    std::vector<TTHRow> out;
    out.reserve(order.size());
    for (auto i : order) out.push_back(tth.rows()[i]);
    return out;
}

SortedTTH sort_by_axis(const TTH& tth, SortAxis axis, SortOrder order) {
    SortedTTH out{tth, {}};
    out.order.resize(tth.size());
    for (std::size_t i = 0; i < out.order.size(); ++i) out.order[i] = i;
    const auto& rows = tth.rows();
    const bool desc = order == SortOrder::desc;
    // Rows are stored in key order, so a stable sort on the primary axis leaves ties in
    // (term id, interval, aux) order.
    if (axis == SortAxis::count) {
        std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
            return desc ? rows[a].count > rows[b].count : rows[a].count < rows[b].count;
        });
    } else {
        std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
            const std::string& ta = tth.term_string(rows[a].term);
            const std::string& tb = tth.term_string(rows[b].term);
            return desc ? ta > tb : ta < tb;
        });
    }
    return out;
}

SortedTTH top(const SortedTTH& sorted, std::size_t k) {
    SortedTTH out{sorted.tth, sorted.order};
    if (out.order.size() > k) out.order.resize(k);
    return out;
}

SortedTTH top_distinct(const SortedTTH& sorted, std::size_t k, const std::string& attr) {
    if (attr != "term" && attr != "ts") {
        fail(ErrorKind::schema, "top distinct works on term or ts, not '" + attr + "'");
    }
    const bool by_term = attr == "term";
    std::set<std::int64_t> chosen;
    SortedTTH out{sorted.tth, {}};
    for (auto i : sorted.order) {
        const TTHRow& r = sorted.tth.rows()[i];
        std::int64_t v = by_term ? static_cast<std::int64_t>(r.term) : r.interval;
        if (!chosen.contains(v)) {
            if (chosen.size() >= k) continue;
            chosen.insert(v);
        }
        out.order.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// axes

std::string_view to_string(Axis axis) noexcept { return axis == Axis::term ? "term" : "ts"; }

std::optional<Axis> axis_from_string(std::string_view s) {
    if (s == "term") return Axis::term;
    if (s == "ts") return Axis::ts;
    return std::nullopt;
}

Marginal1D collapse(const TTH& tth, Axis removed) {
    Marginal1D out;
    out.axis = removed == Axis::term ? Axis::ts : Axis::term;
    std::map<std::int64_t, MarginalRow> acc;
    for (const auto& r : tth.rows()) {
        std::int64_t v = out.axis == Axis::ts ? r.interval : static_cast<std::int64_t>(r.term);
        auto& m = acc[v];
        m.value = v;
        m.count += r.count;
        m.docs = union_docs(m.docs, r.docs);
    }
    for (auto& [v, row] : acc) out.rows.push_back(std::move(row));
    return out;
}

AxisValues extract_axis(const TTH& tth, Axis axis) {
    AxisValues out;
    out.axis = axis;
    if (axis == Axis::ts) {
        std::set<Interval> s;
        for (const auto& r : tth.rows()) s.insert(r.interval);
        out.intervals.assign(s.begin(), s.end());
    } else {
        std::set<std::string> s;
        for (const auto& r : tth.rows()) s.insert(tth.term_string(r.term));
        out.terms.assign(s.begin(), s.end());
    }
    return out;
}

KeySet query_index(const TTH& tth, const DocList& docs, std::optional<Date> start, std::optional<Date> end) {
    if (start && end && *start > *end) {
        fail(ErrorKind::range, "query window start " + format_date(*start) + " is after end " + format_date(*end));
    }
    require_sorted_unique(docs, "query");
    KeySet out;
    for (const auto& r : tth.rows()) {
        Date s = tth.grid().interval_start(r.interval);
        if ((start && s < *start) || (end && s > *end)) continue;
        auto a = r.docs.begin();
        auto b = docs.begin();
        bool hit = false;
        while (!hit && a != r.docs.end() && b != docs.end()) {
            if (*a == *b) hit = true;
            else if (*a < *b) ++a;
            else ++b;
        }
        if (hit) out.emplace_back(r.term, r.interval);
    }
    // Rows are key-ordered, so pairs only repeat across aux values of the same run.
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// distance

std::string_view to_string(Metric metric) noexcept { return metric == Metric::euclidean ? "euclidean" : "kl"; }

std::optional<Metric> metric_from_string(std::string_view s) {
    if (s == "euclidean") return Metric::euclidean;
    if (s == "kl") return Metric::kl;
    return std::nullopt;
}

double distance(const TTH& a_in, const TTH& b_in, Metric metric) {
    require_same_schema(a_in, b_in);
    auto [a, b] = align(a_in, b_in);
    std::vector<std::pair<double, double>> cells;
    const auto& ra = a.rows();
    const auto& rb = b.rows();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ra.size() || j < rb.size()) {
        int c = i == ra.size() ? 1 : j == rb.size() ? -1 : compare_keys(ra[i], rb[j]);
        if (c < 0) {
            cells.emplace_back(static_cast<double>(ra[i++].count), 0.0);
        } else if (c > 0) {
            cells.emplace_back(0.0, static_cast<double>(rb[j++].count));
        } else {
            cells.emplace_back(static_cast<double>(ra[i++].count), static_cast<double>(rb[j++].count));
        }
    }
    if (metric == Metric::euclidean) {
        double sum = 0;
        for (auto [x, y] : cells) sum += (x - y) * (x - y);
        return std::sqrt(sum);
    }
    double ta = 0;
    double tb = 0;
    for (auto [x, y] : cells) {
        ta += x;
        tb += y;
    }
    if (ta <= 0 || tb <= 0) {
        fail(ErrorKind::undefined_distribution, "KL divergence is undefined for an empty histogram");
    }
    const double n = static_cast<double>(cells.size());
    const double za = ta + n * kKlSmoothing;
    const double zb = tb + n * kKlSmoothing;
    double kl = 0;
    for (auto [x, y] : cells) {
        double p = (x + kKlSmoothing) / za;
        double q = (y + kKlSmoothing) / zb;
        kl += p * std::log(p / q);
    }
    return std::max(0.0, kl);
}

}  // namespace tth
