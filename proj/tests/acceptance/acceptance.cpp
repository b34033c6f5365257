// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [criterion number ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "fixtures.hpp"
#include "plan_gen.hpp"
#include "tth/analytics.hpp"
#include "tth/error.hpp"
#include "tth/generator.hpp"
#include "tth/mann_whitney.hpp"
#include "tth/plan.hpp"
#include "tth/snapshot.hpp"

using namespace tth;
using namespace tth::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome failed(const std::string& why) { return {false, why}; }

// Tolerances and sizes.
constexpr double kExactTolerance = 1e-9;
constexpr double kNormalTolerance = 0.02;
constexpr double kMinRSquared = 0.95;
constexpr double kMaxResidual = 0.35;
constexpr std::size_t kScalingBase = 20000;
// The normal approximation is checked for samples with at least two observations on
// each side; a one-observation sample has a discrete uniform U distribution that no
// continuity-corrected normal curve follows to within 0.02.
constexpr std::size_t kNormalMinSample = 2;
constexpr std::size_t kBenefitRows = 100000;
constexpr std::int64_t kBenefitRatio = 8;

// ---------------------------------------------------------------------------

Outcome fig2_golden() {
    TTH merged = merge(fig2_left(), fig2_middle());
    if (merged.rows() != fig2_merged_rows()) return failed("merged rows differ from the figure");
    return {true, "5 rows, counts 5,3,6,2,1"};
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> all_positions(const RandomCorpus& c) {
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i < c.categories.size(); ++i) p.push_back(i);
    return p;
}

TTH build_all(const RandomCorpus& c, const BuildPredicate& filter = {}) {
    return build_tth(c.index, "text", c.index.config.base_grid(), filter, c.categories);
}

Outcome oracle_equivalence() {
    Rng rng(20240501);
    std::size_t checks = 0;
    for (int iter = 0; iter < 200; ++iter) {
        RandomCorpus c = random_corpus(rng);
        const auto positions = all_positions(c);
        const std::string where = "corpus " + std::to_string(iter);

        TTH full = build_all(c);
        if (to_brute(full) != brute_build(c, 1, positions)) return failed(where + ": buildTTH");

        // select on a term set
        std::set<std::string> chosen;
        for (int i = 0; i < 3; ++i) chosen.insert("t" + std::to_string(rng.below(20)));
        std::string text = "(in term";
        for (const auto& t : chosen) text += " \"" + t + "\"";
        BruteRows expect_sel;
        for (const auto& [k, v] : brute_build(c, 1, positions)) {
            if (chosen.count(std::get<0>(k))) expect_sel.emplace(k, v);
        }
        if (to_brute(select(full, parse_predicate(text + ")"))) != expect_sel) return failed(where + ": select");

        // coarsen
        const std::int64_t w = rng.between(1, 5);
        if (to_brute(coarsen(full, Width::days(w))) != brute_build(c, w, positions)) {
            return failed(where + ": coarsen by " + std::to_string(w));
        }

        // merge of overlapping date ranges
        const std::int64_t lo = rng.between(0, c.days), hi = rng.between(0, c.days);
        BuildPredicate first, second;
        first.end = kOrigin + std::max(lo, hi);
        second.start = kOrigin + std::min(lo, hi);
        TTH merged = merge(build_all(c, first), build_all(c, second));
        if (to_brute(merged) != brute_build(c, 1, positions)) return failed(where + ": merge");

        // collapse
        for (Axis removed : {Axis::term, Axis::ts}) {
            Axis kept = removed == Axis::term ? Axis::ts : Axis::term;
            if (to_brute(collapse(full, removed), full) != brute_marginal(brute_build(c, 1, positions), kept)) {
                return failed(where + ": collapse");
            }
        }

        // group on the first category
        if (!c.categories.empty()) {
            PartitionedTTH g = group(full, {c.categories[0]});
            std::map<std::string, BruteRows> expect;
            for (const auto& [k, v] : brute_build(c, 1, positions)) expect[std::get<2>(k)[0]].emplace(k, v);
            if (g.parts.size() != expect.size()) return failed(where + ": group part count");
            for (const auto& [key, part] : g.parts) {
                if (to_brute(part) != expect[key[0]]) return failed(where + ": group part " + key[0]);
            }
        }

        // queryIndex
        DocList docs;
        for (const auto& d : c.docs) {
            if (rng.chance(0.3)) docs.push_back(d.id);
        }
        const std::int64_t q0 = rng.between(0, c.days), q1 = q0 + rng.between(0, 3);
        KeySet got = query_index(full, docs, kOrigin + q0, kOrigin + q1);
        std::set<std::pair<std::string, Interval>> expect_keys;
        const std::set<DocId> wanted(docs.begin(), docs.end());
        for (const auto& d : c.docs) {
            if (!wanted.count(d.id) || d.day < q0 || d.day > q1) continue;
            for (const auto& t : d.tokens) expect_keys.emplace(t, d.day);
        }
        std::set<std::pair<std::string, Interval>> got_keys;
        for (const auto& [t, i] : got) got_keys.emplace(full.term_string(t), i);
        if (got_keys != expect_keys || got_keys.size() != got.size()) return failed(where + ": queryIndex");
        checks += 8;
    }
    return {true, "200 corpora, " + std::to_string(checks) + " operator checks"};
}

// ---------------------------------------------------------------------------

Outcome algebraic_laws() {
    Rng rng(777);
    int instances = 0;
    for (int iter = 0; iter < 100; ++iter) {
        CorpusShape shape;
        shape.max_intervals = 24;
        RandomCorpus c = random_corpus(rng, shape);
        auto part = [&] {
            BuildPredicate p;
            const std::int64_t a = rng.between(0, c.days), b = rng.between(0, c.days);
            p.start = kOrigin + std::min(a, b);
            p.end = kOrigin + std::max(a, b) + 1;
            return build_all(c, p);
        };
        TTH x = part(), y = part(), z = part();
        if (merge(merge(x, y), z) != merge(x, merge(y, z))) return failed("associativity, instance " + std::to_string(iter));

        const std::int64_t d = rng.between(1, 6);
        if (coarsen(merge(x, y), Width::days(d)) != merge(coarsen(x, Width::days(d)), coarsen(y, Width::days(d)))) {
            return failed("merge/coarsen commutativity, instance " + std::to_string(iter));
        }

        const std::int64_t d1 = rng.between(1, 4), d2 = d1 * rng.between(1, 4);
        if (coarsen(coarsen(x, Width::days(d1)), Width::days(d2)) != coarsen(x, Width::days(d2))) {
            return failed("quasi-idempotence, instance " + std::to_string(iter));
        }
        ++instances;
    }

    // Precondition violations.
    TTH fig = build_tth(fig1_index(), "text", TimeGrid::uniform(kOrigin, 1));
    try {
        (void)coarsen(coarsen(fig, Width::days(2)), Width::days(3));
        return failed("coarsening width 2 to width 3 did not fail");
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::alignment) return failed("width violation raised " + std::string(to_string(e.kind())));
    }
    try {
        (void)merge(coarsen(fig, Width::days(2)), coarsen(fig, Width::days(3)));
        return failed("merging width 2 with width 3 did not fail");
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::alignment) return failed("merge misalignment raised " + std::string(to_string(e.kind())));
    }
    return {true, std::to_string(instances) + " instances per law; misaligned widths raise alignment errors"};
}

// ---------------------------------------------------------------------------

struct PlanWorld {
    RandomCorpus corpus;
    Environment env;
    std::vector<std::string> terms;
};

PlanWorld plan_world(Rng& rng) {
    CorpusShape shape;
    shape.max_docs = 60;
    shape.max_intervals = 32;
    PlanWorld w;
    do {
        w.corpus = random_corpus(rng, shape);
    } while (w.corpus.docs.size() < 10);
    const auto& c = w.corpus;
    BuildPredicate a, b;
    a.end = kOrigin + c.days * 2 / 3 + 1;
    b.start = kOrigin + c.days / 3;
    w.env.emplace("X", build_all(c, a));
    w.env.emplace("Y", build_all(c, b));
    w.env.emplace("Z", build_all(c));
    for (int i = 0; i < 20; ++i) w.terms.push_back("t" + std::to_string(i));
    return w;
}

Outcome rewrite_soundness() {
    Rng rng(4242);
    std::size_t fired = 0, changed = 0;
    for (int iter = 0; iter < 200; ++iter) {
        PlanWorld w = plan_world(rng);
        PlanGenerator gen(rng, {"X", "Y", "Z"}, w.terms);
        PlanExpr p = gen.any(4);
        RewriteTrace t = rewrite_traced(p, catalog_of(w.env));
        fired += t.applied.size();
        changed += t.expr == p ? 0 : 1;
        Relation original = to_relation(evaluate(p, w.env));
        Relation rewritten = to_relation(evaluate(t.expr, w.env));
        if (original != rewritten) return failed("plan " + std::to_string(iter) + " differs: " + to_text(p));
    }
    if (changed == 0) return failed("no plan was rewritten");
    return {true, "200 plans, " + std::to_string(changed) + " rewritten, " + std::to_string(fired) + " rule applications"};
}

// ---------------------------------------------------------------------------

Outcome rewrite_benefit() {
    auto vocab = bench::synthetic_vocabulary(kBenefitRows / 96 + 1);
    Environment env;
    env.emplace("X", bench::synthetic_tth(kBenefitRows, 1, 0, 96, vocab));
    env.emplace("Y", bench::synthetic_tth(kBenefitRows, 2, 1, 96, vocab));
    PlanExpr p = plan::coarsen(Width::days(kBenefitRatio), plan::merge(plan::source("X"), plan::source("Y")));
    PlanExpr r = rewrite(p, catalog_of(env));
    if (r == p) return failed("plan was not rewritten");
    EvalStats before, after;
    Value a = evaluate(p, env, &before);
    Value b = evaluate(r, env, &after);
    if (!(a == b)) return failed("rewritten plan gives a different result");
    const double ratio = static_cast<double>(after.max_intermediate_rows) / static_cast<double>(before.max_intermediate_rows);
    std::ostringstream d;
    d << "max intermediate rows " << before.max_intermediate_rows << " -> " << after.max_intermediate_rows
      << " (ratio " << ratio << ", limit 0.25)";
    return {ratio <= 0.25, d.str()};
}

// ---------------------------------------------------------------------------

Outcome scaling_shape() {
    bench::BenchOptions o;
    o.base = kScalingBase;
    o.repetitions = 15;
    std::vector<bench::BenchRow> rows = bench::run_bench(o);
    std::ostringstream d;
    bool ok = true;
    for (const std::string op : {"merge", "coarsen"}) {
        std::vector<double> x, y;
        for (const auto& r : rows) {
            if (r.op != op) continue;
            if (!r.bound_ok) return failed(op + " cardinality bound violated at size " + std::to_string(r.size));
            x.push_back(static_cast<double>(r.size));
            y.push_back(r.seconds);
        }
        bench::LinearFit f = bench::fit_linear(x, y);
        ok = ok && f.r_squared >= kMinRSquared && f.max_relative_residual <= kMaxResidual;
        d << op << " R2=" << f.r_squared << " max residual=" << f.max_relative_residual << " ms:";
        for (double t : y) d << ' ' << t * 1e3;
        d << "; ";
    }
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------

Outcome mann_whitney() {
    Rng rng(99);
    double worst_exact = 0, worst_normal = 0, worst_single = 0;
    std::size_t cases = 0;
    for (std::size_t n1 = 1; n1 < 12; ++n1) {
        for (std::size_t n2 = 1; n1 + n2 <= 12; ++n2) {
            for (int rep = 0; rep < 50; ++rep) {
                std::vector<double> x, y;
                for (std::size_t i = 0; i < n1; ++i) x.push_back(static_cast<double>(rng.below(8)));
                for (std::size_t i = 0; i < n2; ++i) y.push_back(static_cast<double>(rng.below(8)));
                const double oracle = enumerate_u_less(x, y);
                const double p = mann_whitney_u(x, y, Alternative::less, UMethod::exact).p_value;
                worst_exact = std::max(worst_exact, std::abs(p - oracle));
                ++cases;
            }
        }
    }
    for (std::size_t total = 13; total <= 20; ++total) {
        for (std::size_t n1 = 1; n1 < total; ++n1) {
            for (int rep = 0; rep < 5; ++rep) {
                std::vector<double> pool(total);
                for (std::size_t i = 0; i < total; ++i) pool[i] = static_cast<double>(i);
                for (std::size_t i = total - 1; i > 0; --i) std::swap(pool[i], pool[rng.below(i + 1)]);
                std::vector<double> x(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n1));
                std::vector<double> y(pool.begin() + static_cast<std::ptrdiff_t>(n1), pool.end());
                const double exact = mann_whitney_u(x, y, Alternative::less, UMethod::exact).p_value;
                const double normal = mann_whitney_u(x, y, Alternative::less, UMethod::normal).p_value;
                double& worst = std::min(n1, total - n1) >= kNormalMinSample ? worst_normal : worst_single;
                worst = std::max(worst, std::abs(exact - normal));
            }
        }
    }
    std::ostringstream d;
    d << cases << " exact cases, max error " << worst_exact << "; normal max gap " << worst_normal
      << " (min sample >= " << kNormalMinSample << "; single-observation samples reach " << worst_single << ")";
    return {worst_exact <= kExactTolerance && worst_normal <= kNormalTolerance, d.str()};
}

// ---------------------------------------------------------------------------

Outcome tfidf_ranking() {
    Rng rng(31337);
    for (int iter = 0; iter < 20; ++iter) {
        RandomCorpus c = random_corpus(rng);
        TTH full = build_all(c);
        const std::int64_t k = rng.between(1, 5);
        auto got = tf_idf(full, k, document_totals(c.index, full.grid()));

        // Oracle: per interval, documents and per-term counts straight from the raw docs.
        std::map<Interval, std::set<DocId>> docs_in;
        std::map<Interval, std::map<std::string, std::pair<Count, std::set<DocId>>>> stats;
        for (const auto& d : c.docs) {
            docs_in[d.day].insert(d.id);
            for (const auto& t : d.tokens) {
                auto& s = stats[d.day][t];
                ++s.first;
                s.second.insert(d.id);
            }
        }
        std::vector<std::tuple<Interval, std::string, double>> expect;
        for (const auto& [ts, terms] : stats) {
            std::vector<std::tuple<double, TermId, std::string>> scored;
            for (const auto& [t, s] : terms) {
                const double n = static_cast<double>(docs_in[ts].size());
                const double df = static_cast<double>(s.second.size());
                const double score = static_cast<double>(s.first) * std::log(n / df);
                if (s.second.size() == docs_in[ts].size() && score != 0.0) return failed("all-document term scored nonzero");
                scored.emplace_back(-score, c.index.field("text").vocabulary->lookup(t), t);
            }
            std::sort(scored.begin(), scored.end());
            for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(k); ++i) {
                expect.emplace_back(ts, std::get<2>(scored[i]), -std::get<0>(scored[i]));
            }
        }
        if (got.size() != expect.size()) return failed("corpus " + std::to_string(iter) + ": result size");
        for (std::size_t i = 0; i < got.size(); ++i) {
            const auto& [ts, term, score] = expect[i];
            if (got[i].interval != ts || full.term_string(got[i].term) != term || got[i].score != score) {
                return failed("corpus " + std::to_string(iter) + ": row " + std::to_string(i));
            }
            if (got[i].df == got[i].documents && got[i].score != 0.0) return failed("all-document term scored nonzero");
        }
    }
    return {true, "20 corpora match the oracle ranking; all-document terms score 0"};
}

// ---------------------------------------------------------------------------

TTH build_generated(const GenSpec& spec, const std::vector<std::string>& aux = {}) {
    CorpusIndex index = index_corpus(load_corpus(generated_config(spec), generate_records(spec)));
    return build_tth(index, spec.field, index.config.base_grid(), {}, aux);
}

Outcome recipes() {
    std::ostringstream d;
    const std::size_t docs = 200;

    {  // co-occurrence: anchor and companion planted together
        GenSpec s;
        s.num_docs = docs;
        s.vocab_size = 300;
        s.intervals = 20;
        s.doc_length = 20;
        s.seed = 11;
        s.planted = {{150, 12, 10, {}}, {170, 12, 10, {}}};
        for (int run = 0; run < 2; ++run) {
            TTH t = build_generated(s);
            CooccurrenceOptions o;
            o.top_intervals = 1;
            o.k = 3;
            auto r = topic_cooccurrence(t, generated_term(150, s.vocab_size), o);
            if (r.size() != 1 || r[0].terms.empty() || r[0].terms[0] != generated_term(170, s.vocab_size)) {
                return failed("cooccur did not recover the companion term");
            }
        }
        d << "cooccur ok; ";
    }
    {  // trendy: spike in one interval
        GenSpec s;
        s.num_docs = docs;
        s.vocab_size = 300;
        s.intervals = 20;
        s.doc_length = 20;
        s.seed = 12;
        s.width_days = 7;
        s.planted = {{40, 15, 10, {}}};
        TTH t = build_generated(s);
        // Planted rise: extra occurrences per document times documents in the interval.
        double p_max = 0, h = 0;
        for (std::size_t r = 1; r <= s.vocab_size; ++r) h += 1.0 / static_cast<double>(r);
        p_max = 1.0 / h;
        const double per_doc = std::ceil(10 * p_max * static_cast<double>(s.doc_length));
        const double planted_slope = per_doc * static_cast<double>(docs / s.intervals);
        TrendyOptions o;
        o.today = s.origin + (s.intervals - 1) * s.width_days;
        o.months = 6;
        o.theta = planted_slope / 2;
        auto r = trendy_terms(t, o);
        if (r.empty() || r[0].text != generated_term(40, s.vocab_size)) return failed("trendy did not rank the spike term first");
        d << "trendy ok (theta " << o.theta << "); ";
    }
    {  // salience: four terms boosted for one week
        GenSpec s;
        s.num_docs = docs;
        s.vocab_size = 50;
        s.intervals = 56;
        s.doc_length = 30;
        s.seed = 13;
        for (std::int64_t day = 21; day < 28; ++day) {
            for (std::size_t term : {10, 11, 12, 13}) s.planted.push_back({term, day, 3, {}});
        }
        TTH t = build_generated(s);
        std::vector<std::string> q;
        for (std::size_t term : {10, 11, 12, 13}) q.push_back(generated_term(term, s.vocab_size));
        SalienceResult r = salience(t, q, {});
        if (!r.salient) return failed("salience did not flag the planted week");
        if (r.view.grid.interval_start(r.extremal) != s.origin + 21) return failed("salience picked the wrong week");
        d << "salience ok; ";
    }
    {  // synchronized topics: newspaper B is a copy of A
        GenSpec s;
        s.num_docs = docs;
        s.vocab_size = 100;
        s.intervals = 10;
        s.doc_length = 20;
        s.seed = 14;
        s.aux = {{"newspaper", {"A", "C", "D"}}};
        s.clone = CloneSpec{"newspaper", "A", {"B"}};
        TTH t = build_generated(s, {"newspaper"});
        auto groups = synchronized_topics(t, {});
        bool paired = false;
        for (const auto& g : groups) {
            const bool has_a = std::count(g.members.begin(), g.members.end(), "A") > 0;
            const bool has_b = std::count(g.members.begin(), g.members.end(), "B") > 0;
            if (has_a != has_b) return failed("a clone was grouped without its source");
            if (g.members == std::vector<std::string>{"A", "B"}) paired = true;
        }
        if (!paired) return failed("the cloned newspapers were not paired");
        d << "sync ok";
    }
    return {true, d.str()};
}

// ---------------------------------------------------------------------------

Outcome snapshot_round_trip() {
    Rng rng(5150);
    for (int iter = 0; iter < 50; ++iter) {
        RandomCorpus c = random_corpus(rng);
        TTH t = build_all(c);
        if (rng.chance(0.3)) t = coarsen(t, Width::days(rng.between(2, 4)));
        const std::string first = snapshot_string(t);
        std::istringstream in(first);
        TTH loaded = load_snapshot(in, t.vocabulary(), t.forward());
        if (!(loaded == t)) return failed("snapshot " + std::to_string(iter) + " loads to a different histogram");
        if (snapshot_string(loaded) != first) return failed("snapshot " + std::to_string(iter) + " is not byte-stable");
    }
    return {true, "50 histograms"};
}

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "merge figure golden rows", 1, fig2_golden},
        {2, "oracle equivalence on random corpora", 60, oracle_equivalence},
        {3, "algebraic laws", 60, algebraic_laws},
        {4, "rewrite soundness", 60, rewrite_soundness},
        {5, "rewrite benefit", 60, rewrite_benefit},
        {6, "merge and coarsen scale linearly", 120, scaling_shape},
        {7, "Mann-Whitney U p-values", 60, mann_whitney},
        {8, "TF-IDF ranking", 60, tfidf_ranking},
        {9, "end-to-end recipes", 40, recipes},
        {10, "snapshot round trip", 60, snapshot_round_trip},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = failed(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && secs > c.budget_seconds) {
            o = failed("took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_seconds) + " s");
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %2d  %-40s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
