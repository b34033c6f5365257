#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "bench.hpp"
#include "tth/analytics.hpp"
#include "tth/error.hpp"
#include "tth/generator.hpp"
#include "tth/persist.hpp"
#include "tth/plan.hpp"
#include "tth/snapshot.hpp"

namespace tth::cli {

namespace fs = std::filesystem;

void write_relation(const Relation& rel, std::ostream& out, char separator) {
    for (std::size_t i = 0; i < rel.columns.size(); ++i) {
        out << (i ? std::string(1, separator) : "") << csv_escape(rel.columns[i], separator);
    }
    out << '\n';
    for (const auto& row : rel.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? std::string(1, separator) : "") << csv_escape(format_cell(row[i]), separator);
        }
        out << '\n';
    }
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::int64_t to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::argument, what + ": '" + s + "' is not an integer");
}

/// "7", "7d" -> days; "3m" -> months.
Width parse_width(const std::string& s) {
    if (s.empty()) fail(ErrorKind::argument, "empty width");
    if (s.back() == 'm') return Width::months(to_int(s.substr(0, s.size() - 1), "width"));
    if (s.back() == 'd') return Width::days(to_int(s.substr(0, s.size() - 1), "width"));
    return Width::days(to_int(s, "width"));
}

char separator_for(const std::string& format) {
    if (format == "csv") return ',';
    if (format == "tsv") return '\t';
    fail(ErrorKind::argument, "unknown format '" + format + "' (csv or tsv)");
}

/// Writes to `path`, or to `fallback` when the path is empty.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) fail(ErrorKind::io, "cannot write " + path);
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

std::string series_name(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_';
    return out.empty() ? "series" : out;
}

/// One two-column x,y CSV file per series: <dir>/<report>_<series>.csv.
void write_plot(const std::string& dir, const std::string& report, const std::string& series,
                const std::vector<std::pair<std::string, std::string>>& points) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    const fs::path p = fs::path(dir) / (report + "_" + series_name(series) + ".csv");
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + p.string());
    out << "x,y\n";
    for (const auto& [x, y] : points) out << csv_escape(x) << ',' << csv_escape(y) << '\n';
}

// ---------------------------------------------------------------------------
// Loading histograms

struct LoadedSources {
    Environment env;
    std::optional<CorpusIndex> index;
};

/// Snapshots share one vocabulary: the index's when given, else the union of their terms.
LoadedSources load_sources(const std::vector<std::pair<std::string, std::string>>& specs, const std::string& index_dir) {
    LoadedSources out;
    std::map<std::string, TTH> fresh;
    for (const auto& [name, path] : specs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) fail(ErrorKind::io, "cannot read " + path);
        fresh.emplace(name, load_snapshot(in));
    }
    if (!index_dir.empty()) {
        out.index = load_index(index_dir);
        for (const auto& [name, path] : specs) {
            const TTH& t = fresh.at(name);
            const std::string field = t.field().empty() ? out.index->config.term_index_fields.at(0) : t.field();
            const FieldIndex& f = out.index->field(field);
            out.env.emplace(name, load_snapshot_file(path, f.vocabulary, f.forward));
        }
        return out;
    }
    auto vocab = std::make_shared<Vocabulary>();
    for (const auto& [name, path] : specs) {
        const TTH& t = fresh.at(name);
        for (const auto& r : t.rows()) vocab->intern(t.term_string(r.term));
    }
    std::shared_ptr<const Vocabulary> shared = vocab;
    for (const auto& [name, path] : specs) out.env.emplace(name, load_snapshot_file(path, shared));
    return out;
}

std::pair<std::string, std::string> parse_source(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos) return {fs::path(s).stem().string(), s};
    return {s.substr(0, eq), s.substr(eq + 1)};
}

// ---------------------------------------------------------------------------
// Subcommands

struct IngestArgs {
    std::string config, corpus, out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
    MappingConfig config = load_mapping_config(a.config);
    Corpus corpus = load_corpus_file(config, a.corpus);
    CorpusIndex index = index_corpus(corpus);
    save_index(index, a.out);
    out << "corpus: " << config.corpus_name << '\n';
    out << "documents: " << index.documents.size() << '\n';
    for (const auto& field : config.term_index_fields) {
        const FieldIndex& f = index.field(field);
        out << "field " << field << ": " << f.vocabulary->size() << " terms, " << f.forward->entry_count()
            << " term-document pairs\n";
    }
    return 0;
}

struct BuildArgs {
    std::string index, out, field, width = "1", origin, boundaries, from, to, aux;
    std::vector<std::string> where, contains;
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
    CorpusIndex index = load_index(a.index);
    const std::string field = a.field.empty() ? index.config.term_index_fields.at(0) : a.field;
    const Date origin = a.origin.empty() ? index.config.grid_origin : parse_iso_date(a.origin);

    TimeGrid grid;
    if (!a.boundaries.empty()) {
        std::vector<Date> b;
        for (const auto& d : split(a.boundaries, ',')) b.push_back(parse_iso_date(d));
        grid = TimeGrid::from_boundaries(std::move(b));
    } else {
        Width w = parse_width(a.width);
        if (w.amount <= 0) fail(ErrorKind::argument, "width must be positive");
        if (w.unit == Width::Unit::days) {
            grid = TimeGrid::uniform(origin, w.amount);
        } else {
            const Date start = Date::from_ymd(origin.year(), origin.month(), 1);
            Date last = start;
            for (const auto& d : index.documents) last = std::max(last, d.date);
            Date end = start.add_months(static_cast<int>(w.amount));
            while (end <= last) end = end.add_months(static_cast<int>(w.amount));
            grid = TimeGrid::calendar_months(start, end, static_cast<int>(w.amount));
        }
    }

    BuildPredicate filter;
    if (!a.from.empty()) filter.start = parse_iso_date(a.from);
    if (!a.to.empty()) filter.end = parse_iso_date(a.to);
    for (const auto& w : a.where) {
        auto eq = w.find('=');
        if (eq == std::string::npos) fail(ErrorKind::argument, "--where expects attr=value, got '" + w + "'");
        filter.aux_equals.emplace_back(w.substr(0, eq), w.substr(eq + 1));
    }
    for (const auto& c : a.contains) {
        auto colon = c.rfind(':');
        if (colon == std::string::npos) filter.term_thresholds.push_back({c, 1});
        else filter.term_thresholds.push_back({c.substr(0, colon), to_int(c.substr(colon + 1), "--contains")});
    }
    TTH tth = build_tth(index, field, grid, filter, split(a.aux, ','));
    save_snapshot_file(a.out, tth);
    out << "rows: " << tth.size() << '\n';
    return 0;
}

struct QueryArgs {
    std::string plan, index, format = "csv", out;
    std::vector<std::string> sources;
    bool no_rewrite = false;
    bool explain = false;
};

int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream& err) {
    std::string text = a.plan;
    if (!text.empty() && text.front() != '(' && fs::is_regular_file(text)) text = read_text(text);
    PlanExpr plan = parse_plan(text);
    std::vector<std::pair<std::string, std::string>> specs;
    for (const auto& s : a.sources) specs.push_back(parse_source(s));
    LoadedSources loaded = load_sources(specs, a.index);
    if (!a.no_rewrite) {
        RewriteTrace trace = rewrite_traced(plan, catalog_of(loaded.env));
        if (a.explain) {
            err << "plan: " << to_text(trace.expr) << '\n';
            for (const auto& r : trace.applied) err << "applied: " << r << '\n';
        }
        plan = std::move(trace.expr);
    } else {
        check_types(plan, catalog_of(loaded.env));
        if (a.explain) err << "plan: " << to_text(plan) << '\n';
    }
    EvalStats stats;
    Value v = evaluate(plan, loaded.env, &stats);
    if (a.explain) err << "max intermediate rows: " << stats.max_intermediate_rows << '\n';
    Output o(a.out, out);
    write_relation(to_relation(v), *o, separator_for(a.format));
    return 0;
}

struct AnalyzeArgs {
    std::string recipe, snapshot, other, index, out, format = "csv", plot_dir;
    std::string term, terms, width, window, today, group_by, metric = "euclidean";
    std::int64_t k = -1, ct = 0, top_intervals = 20;
    double theta = 0, alpha = 0.05, min_jaccard = 1;
};

std::vector<std::pair<std::string, std::string>> series_of(const TTH& tth, const std::string& term) {
    TTH flat = rollup(tth);
    std::vector<std::pair<std::string, std::string>> pts;
    if (flat.empty()) return pts;
    Interval lo = flat.rows().front().interval, hi = lo;
    for (const auto& r : flat.rows()) {
        lo = std::min(lo, r.interval);
        hi = std::max(hi, r.interval);
    }
    for (const auto& r : dense_view(flat, {term}, lo, hi)) {
        pts.emplace_back(format_date(flat.grid().interval_start(r.interval)), std::to_string(r.count));
    }
    return pts;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<std::pair<std::string, std::string>> specs{{"a", a.snapshot}};
    if (!a.other.empty()) specs.emplace_back("b", a.other);
    LoadedSources loaded = load_sources(specs, a.index);
    const TTH& tth = loaded.env.at("a");
    const Vocabulary& vocab = *tth.vocabulary();
    const char sep = separator_for(a.format);
    Relation rel;
    auto date = [](const TimeGrid& g, Interval i) { return format_date(g.interval_start(i)); };

    if (a.recipe == "tfidf") {
        std::optional<IntervalTotals> totals;
        if (loaded.index) totals = document_totals(*loaded.index, tth.grid());
        rel.columns = {"rank", "term", "interval_start", "interval_end", "tf_idf", "count", "df", "documents"};
        std::map<std::string, std::vector<std::pair<std::string, std::string>>> series;
        for (const auto& r : tf_idf(tth, a.k < 0 ? 20 : a.k, totals)) {
            rel.rows.push_back({r.rank, vocab.term_of(r.term), date(tth.grid(), r.interval),
                                format_date(tth.grid().interval_end(r.interval)), num(r.score), r.count, r.df,
                                r.documents});
            series[vocab.term_of(r.term)].push_back({date(tth.grid(), r.interval), num(r.score)});
        }
        for (const auto& [term, pts] : series) write_plot(a.plot_dir, "tfidf", term, pts);
    } else if (a.recipe == "distance") {
        if (a.other.empty()) fail(ErrorKind::argument, "distance needs --other");
        auto metric = metric_from_string(a.metric);
        if (!metric) fail(ErrorKind::argument, "unknown metric '" + a.metric + "'");
        rel.columns = {"metric", "value"};
        rel.rows.push_back({a.metric, num(distance(tth, loaded.env.at("b"), *metric))});
    } else if (a.recipe == "cooccur") {
        if (a.term.empty()) fail(ErrorKind::argument, "cooccur needs --term");
        CooccurrenceOptions o;
        if (!a.window.empty()) {
            Width w = parse_width(a.window);
            if (w.unit != Width::Unit::days) fail(ErrorKind::argument, "cooccur window must be in days");
            o.window_days = w.amount;
        }
        o.top_intervals = static_cast<std::size_t>(a.top_intervals);
        if (a.k >= 0) o.k = static_cast<std::size_t>(a.k);
        if (!a.group_by.empty()) o.group_by = a.group_by;
        rel.columns = {"group", "rank", "term", "count", "intervals"};
        for (const auto& r : topic_cooccurrence(tth, a.term, o)) {
            std::string group, intervals;
            for (const auto& g : r.group) group += (group.empty() ? "" : ";") + g;
            for (auto i : r.intervals) intervals += (intervals.empty() ? "" : ";") + date(r.grid, i);
            std::vector<std::pair<std::string, std::string>> pts;
            for (std::size_t i = 0; i < r.terms.size(); ++i) {
                rel.rows.push_back({group, static_cast<std::int64_t>(i + 1), r.terms[i], r.counts[i], intervals});
                pts.emplace_back(r.terms[i], std::to_string(r.counts[i]));
            }
            write_plot(a.plot_dir, "cooccur", group.empty() ? "all" : group, pts);
        }
    } else if (a.recipe == "salience") {
        SalienceOptions o;
        if (!a.width.empty()) o.week = parse_width(a.width);
        o.ct = a.ct;
        o.alpha = a.alpha;
        SalienceResult s = salience(tth, split(a.terms, ','), o);
        rel.columns = {"week_start", "rank_sum", "ranks", "u", "p_value", "significant", "extremal"};
        std::vector<std::pair<std::string, std::string>> pts;
        for (const auto& w : s.weeks) {
            std::string ranks;
            for (auto r : w.ranks) ranks += (ranks.empty() ? "" : ";") + std::to_string(r);
            std::string u, p, sig;
            for (const auto& c : s.comparisons) {
                if (c.interval != w.interval) continue;
                u = num(c.test.u);
                p = num(c.test.p_value);
                sig = c.significant ? "true" : "false";
            }
            rel.rows.push_back({date(s.view.grid, w.interval), w.rank_sum, ranks, u, p, sig,
                                std::string(w.interval == s.extremal ? "true" : "false")});
            pts.emplace_back(date(s.view.grid, w.interval), std::to_string(w.rank_sum));
        }
        write_plot(a.plot_dir, "salience", "rank_sum", pts);
        err << "salient: " << (s.salient ? "yes" : "no") << " (week " << date(s.view.grid, s.extremal) << ")\n";
    } else if (a.recipe == "trendy") {
        TrendyOptions o;
        if (!a.today.empty()) {
            o.today = parse_iso_date(a.today);
        } else {
            if (tth.empty()) fail(ErrorKind::argument, "trendy on an empty histogram needs --today");
            Interval last = tth.rows().front().interval;
            for (const auto& r : tth.rows()) last = std::max(last, r.interval);
            o.today = tth.grid().interval_start(last);
        }
        if (!a.window.empty()) o.months = static_cast<int>(to_int(a.window, "--window"));
        o.theta = a.theta;
        if (!a.width.empty()) o.coarsen = parse_width(a.width);
        rel.columns = {"rank", "term", "slope", "interval_start", "doc_ids"};
        std::int64_t rank = 0;
        for (const auto& t : trendy_terms(tth, o)) {
            rel.rows.push_back({++rank, t.text, num(t.slope), date(t.grid, t.interval), t.docs});
            write_plot(a.plot_dir, "trendy", t.text, series_of(tth, t.text));
        }
    } else if (a.recipe == "sync") {
        SyncOptions o;
        if (!a.group_by.empty()) o.group_by = a.group_by;
        if (a.k >= 0) o.k = static_cast<std::size_t>(a.k);
        o.min_jaccard = a.min_jaccard;
        rel.columns = {"interval_start", "members", "terms"};
        for (const auto& g : synchronized_topics(tth, o)) {
            std::string members, terms;
            for (const auto& m : g.members) members += (members.empty() ? "" : ";") + m;
            for (const auto& t : g.terms) terms += (terms.empty() ? "" : ";") + t;
            rel.rows.push_back({date(tth.grid(), g.interval), members, terms});
        }
    } else {
        fail(ErrorKind::argument, "unknown recipe '" + a.recipe + "' (cooccur, salience, trendy, sync, tfidf, distance)");
    }
    Output o(a.out, out);
    write_relation(rel, *o, sep);
    return 0;
}

struct BenchArgs {
    std::size_t n = 20000;
    std::string sizes = "1,2,4,8";
    std::int64_t ratio = 8;
    int reps = 15;
    std::uint64_t seed = 1;
    std::string out, format = "csv";
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    bench::BenchOptions o;
    o.base = a.n;
    o.multipliers.clear();
    for (const auto& s : split(a.sizes, ',')) {
        auto m = to_int(s, "--sizes");
        if (m < 0) fail(ErrorKind::argument, "--sizes entries must be >= 0");
        o.multipliers.push_back(static_cast<std::size_t>(m));
    }
    o.ratio = a.ratio;
    o.repetitions = a.reps;
    o.seed = a.seed;
    Relation rel;
    rel.columns = {"op", "size", "rows_in", "rows_out", "min_rows_out", "bound_ok", "seconds"};
    for (const auto& r : bench::run_bench(o)) {
        rel.rows.push_back({r.op, static_cast<std::int64_t>(r.size), static_cast<std::int64_t>(r.rows_in),
                            static_cast<std::int64_t>(r.rows_out), static_cast<std::int64_t>(r.min_rows_out),
                            std::string(r.bound_ok ? "true" : "false"), num(r.seconds)});
    }
    Output f(a.out, out);
    write_relation(rel, *f, separator_for(a.format));
    return 0;
}

struct ExportArgs {
    std::string snapshot, index, out, format = "csv", plot_dir, terms;
};

int cmd_export(const ExportArgs& a, std::ostream& out) {
    LoadedSources loaded = load_sources({{"a", a.snapshot}}, a.index);
    const TTH& tth = loaded.env.at("a");
    std::vector<std::string> attrs{"term", "ts", "date", "count", "doc_ids"};
    for (const auto& x : tth.aux_schema()) attrs.push_back(x);
    Output o(a.out, out);
    write_relation(project(tth, attrs), *o, separator_for(a.format));
    for (const auto& term : split(a.terms, ',')) write_plot(a.plot_dir, "export", term, series_of(tth, term));
    return 0;
}

struct GenerateArgs {
    std::string spec, out, config_out;
    std::size_t num_docs = 200, vocab = 100, doc_length = 20;
    std::int64_t intervals = 10, width_days = 1;
    double zipf = 1.0;
    std::uint64_t seed = 1;
    std::vector<std::string> plant;
    std::string origin;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    GenSpec spec;
    if (!a.spec.empty()) {
        spec = parse_gen_spec(read_text(a.spec));
    } else {
        spec.num_docs = a.num_docs;
        spec.vocab_size = a.vocab;
        spec.doc_length = a.doc_length;
        spec.intervals = a.intervals;
        spec.width_days = a.width_days;
        spec.zipf_s = a.zipf;
        spec.seed = a.seed;
        if (!a.origin.empty()) spec.origin = parse_iso_date(a.origin);
        for (const auto& p : a.plant) {
            auto parts = split(p, ':');
            if (parts.size() < 2 || parts.size() > 3) fail(ErrorKind::argument, "--plant expects term:interval[:boost]");
            PlantedSignal s;
            s.term = static_cast<std::size_t>(to_int(parts[0], "--plant term"));
            s.interval = to_int(parts[1], "--plant interval");
            if (parts.size() == 3) s.boost = std::stod(parts[2]);
            spec.planted.push_back(s);
        }
    }
    spec.validate();
    if (!a.config_out.empty()) {
        std::ofstream c(a.config_out, std::ios::binary);
        if (!c) fail(ErrorKind::io, "cannot write " + a.config_out);
        c << to_json(generated_config(spec)) << '\n';
    }
    Output o(a.out, out);
    write_jsonl(spec, *o);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporal term histogram toolkit"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* ing = app.add_subcommand("ingest", "Index a corpus file");
    ing->add_option("--config", ingest.config, "Mapping config (JSON)")->required();
    ing->add_option("--out", ingest.out, "Index directory")->required();
    ing->add_option("corpus", ingest.corpus, "Corpus file (.jsonl or .csv)")->required();

    BuildArgs build;
    auto* bld = app.add_subcommand("build", "Build a histogram snapshot from an index");
    bld->add_option("--index", build.index, "Index directory")->required();
    bld->add_option("--out", build.out, "Snapshot file")->required();
    bld->add_option("--field", build.field, "Term-index field (default: first)");
    bld->add_option("--width", build.width, "Interval width: days (7, 7d) or calendar months (1m)");
    bld->add_option("--origin", build.origin, "Grid origin (default: config origin)");
    bld->add_option("--boundaries", build.boundaries, "Explicit interval boundaries d1,d2,...");
    bld->add_option("--from", build.from, "First document date (inclusive)");
    bld->add_option("--to", build.to, "Last document date (exclusive)");
    bld->add_option("--where", build.where, "Category filter attr=value (repeatable)");
    bld->add_option("--contains", build.contains, "Documents containing term[:min count] (repeatable)");
    bld->add_option("--aux", build.aux, "Auxiliary attributes to keep, comma separated");

    QueryArgs query;
    auto* qry = app.add_subcommand("query", "Evaluate a query plan");
    qry->add_option("--plan", query.plan, "Plan text or plan file")->required();
    qry->add_option("--source", query.sources, "Source name=snapshot (repeatable)");
    qry->add_option("sources", query.sources, "More name=snapshot sources");
    qry->add_option("--index", query.index, "Index directory supplying vocabulary and forward index");
    qry->add_flag("--no-rewrite", query.no_rewrite, "Evaluate the plan as written");
    qry->add_flag("--explain", query.explain, "Print the executed plan to stderr");
    qry->add_option("--format", query.format, "csv or tsv");
    qry->add_option("--out", query.out, "Result file (default: stdout)");

    AnalyzeArgs analyze;
    auto* ana = app.add_subcommand("analyze", "Run an analytics recipe");
    ana->add_option("recipe", analyze.recipe, "cooccur, salience, trendy, sync, tfidf or distance")->required();
    ana->add_option("--snapshot", analyze.snapshot, "Histogram snapshot")->required();
    ana->add_option("--other", analyze.other, "Second snapshot (distance)");
    ana->add_option("--index", analyze.index, "Index directory");
    ana->add_option("--out", analyze.out, "Report file (default: stdout)");
    ana->add_option("--format", analyze.format, "csv or tsv");
    ana->add_option("--plot-dir", analyze.plot_dir, "Directory for x,y plot-data files");
    ana->add_option("--term", analyze.term, "Anchor term (cooccur)");
    ana->add_option("--terms", analyze.terms, "Query terms, comma separated (salience)");
    ana->add_option("--k", analyze.k, "Result size");
    ana->add_option("--theta", analyze.theta, "Slope threshold (trendy)");
    ana->add_option("--width", analyze.width, "Week width (salience) or re-binning width (trendy)");
    ana->add_option("--window", analyze.window, "Window days (cooccur) or months (trendy)");
    ana->add_option("--today", analyze.today, "Reference date (trendy)");
    ana->add_option("--group-by", analyze.group_by, "Grouping attribute (cooccur, sync)");
    ana->add_option("--ct", analyze.ct, "Count threshold (salience)");
    ana->add_option("--alpha", analyze.alpha, "Significance level (salience)");
    ana->add_option("--top-intervals", analyze.top_intervals, "Anchor intervals (cooccur)");
    ana->add_option("--min-jaccard", analyze.min_jaccard, "Similarity for synchronized groups (sync)");
    ana->add_option("--metric", analyze.metric, "euclidean or kl (distance)");

    BenchArgs bench_args;
    auto* bch = app.add_subcommand("bench", "Time merge and coarsen over growing inputs");
    bch->add_option("--n", bench_args.n, "Base row count");
    bch->add_option("--sizes", bench_args.sizes, "Size multipliers, comma separated");
    bch->add_option("--ratio", bench_args.ratio, "Coarsen width ratio");
    bch->add_option("--reps", bench_args.reps, "Repetitions per point (best is kept)");
    bch->add_option("--seed", bench_args.seed, "Random seed");
    bch->add_option("--out", bench_args.out, "CSV file (default: stdout)");
    bch->add_option("--format", bench_args.format, "csv or tsv");

    ExportArgs exp;
    auto* ex = app.add_subcommand("export", "Export snapshot rows and plot data");
    ex->add_option("--snapshot", exp.snapshot, "Histogram snapshot")->required();
    ex->add_option("--index", exp.index, "Index directory");
    ex->add_option("--out", exp.out, "Table file (default: stdout)");
    ex->add_option("--format", exp.format, "csv or tsv");
    ex->add_option("--plot-dir", exp.plot_dir, "Directory for per-term x,y series");
    ex->add_option("--terms", exp.terms, "Terms to plot, comma separated");

    GenerateArgs gen;
    auto* gn = app.add_subcommand("generate", "Write a synthetic corpus");
    gn->add_option("--spec", gen.spec, "Generator spec (JSON)");
    gn->add_option("--out", gen.out, "Corpus file (default: stdout)");
    gn->add_option("--config-out", gen.config_out, "Also write a mapping config for the corpus");
    gn->add_option("--num-docs", gen.num_docs);
    gn->add_option("--vocab", gen.vocab);
    gn->add_option("--doc-length", gen.doc_length);
    gn->add_option("--intervals", gen.intervals);
    gn->add_option("--width-days", gen.width_days);
    gn->add_option("--zipf", gen.zipf);
    gn->add_option("--origin", gen.origin);
    gn->add_option("--seed", gen.seed);
    gn->add_option("--plant", gen.plant, "term:interval[:boost] (repeatable)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*ing) return cmd_ingest(ingest, out);
        if (*bld) return cmd_build(build, out);
        if (*qry) return cmd_query(query, out, err);
        if (*ana) return cmd_analyze(analyze, out, err);
        if (*bch) return cmd_bench(bench_args, out);
        if (*ex) return cmd_export(exp, out);
        if (*gn) return cmd_generate(gen, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << "error (io): " << e.what() << '\n';
        return exit_code(ErrorKind::io);
    }
    return 2;
}

}  // namespace tth::cli
