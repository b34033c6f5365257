#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "tth/analytics.hpp"
#include "tth/functions.hpp"
#include "tth/generator.hpp"
#include "tth/tokenizer.hpp"

using namespace tth;
using namespace tth::testing;

namespace {

// Histogram over `terms` from (term index, interval, count) triples; each row gets
// `count` fresh documents so counts and document lists stay consistent.
TTH counts_tth(const std::vector<std::string>& terms, const std::vector<std::tuple<TermId, Interval, Count>>& cells,
               std::int64_t width = 1) {
    auto v = std::make_shared<const Vocabulary>(terms);
    std::vector<TTHRow> rows;
    DocId next = 1;
    for (const auto& [t, ts, c] : cells) {
        TTHRow r{t, ts, c, {}, {}};
        r.docs.push_back(next++);
        rows.push_back(std::move(r));
    }
    return TTH::from_rows(TimeGrid::uniform(kOrigin, width), {}, v, std::move(rows));
}

UTestResult mw(std::vector<double> x, std::vector<double> y, Alternative alt = Alternative::less,
               UMethod method = UMethod::automatic) {
    return mann_whitney_u(x, y, alt, method);
}

}  // namespace

TEST_SUITE("mann-whitney") {
    TEST_CASE("exact values") {
        auto r = mw({1, 2}, {3, 4});
        CHECK(r.u == 0);
        CHECK(r.method == UMethod::exact);
        CHECK(r.p_value == doctest::Approx(1.0 / 6).epsilon(1e-12));
        CHECK(mw({1, 2, 3}, {8, 9, 10}).p_value == doctest::Approx(1.0 / 20).epsilon(1e-12));
        CHECK(mw({1, 2, 3, 4}, {8, 9, 10, 11}).p_value == doctest::Approx(1.0 / 70).epsilon(1e-12));
        auto same = mw({1, 2, 3}, {1, 2, 3});
        CHECK(same.u == 4.5);
        CHECK(same.p_value == doctest::Approx(0.7).epsilon(1e-12));
        auto ties = mw({1, 2, 2}, {2, 3});
        CHECK(ties.u == 1);
        CHECK(ties.p_value == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(mw({1}, {2}).u == 0);
    }

    TEST_CASE("alternatives and methods") {
        CHECK(mw({1, 2}, {3, 4}, Alternative::greater).p_value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mw({1, 2}, {3, 4}, Alternative::two_sided).p_value == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(mw({1, 2, 3}, {1, 2, 3}, Alternative::two_sided).p_value == 1.0);
        std::vector<double> x, y;
        for (int i = 0; i < 15; ++i) x.push_back(i);
        for (int i = 0; i < 15; ++i) y.push_back(i + 100);
        CHECK(mw(x, y).method == UMethod::normal);
        CHECK(mw({1, 2}, {3, 4}, Alternative::less, UMethod::normal).method == UMethod::normal);
        CHECK(error_kind([] { mw({}, {1}); }) == ErrorKind::argument);
    }

    TEST_CASE("statistic and exact p against enumeration") {
        Rng rng(41);
        for (int iter = 0; iter < 200; ++iter) {
            std::vector<double> x(1 + rng.below(6)), y(1 + rng.below(6));
            for (auto& v : x) v = static_cast<double>(rng.below(8));
            for (auto& v : y) v = static_cast<double>(rng.below(8));
            auto a = mw(x, y);
            auto b = mw(y, x);
            CHECK(a.u + b.u == doctest::Approx(static_cast<double>(x.size() * y.size())));
            CHECK(a.u >= 0);
            CHECK(a.p_value == doctest::Approx(enumerate_u_less(x, y)).epsilon(1e-9));
        }
    }
}

TEST_SUITE("rank view") {
    TEST_CASE("ties follow term id") {
        TTH t = counts_tth({"X", "Y", "Z"}, {{0, 0, 9}, {1, 0, 5}, {2, 0, 5}}, 7);
        RankedTTH r = rank_view(t, Width::days(7), 0, {"X"});
        REQUIRE(r.rows.size() == 3);
        CHECK(*r.rank_of(0, 0) == 1);
        CHECK(*r.rank_of(1, 0) == 2);
        CHECK(*r.rank_of(2, 0) == 3);
    }

    TEST_CASE("only intervals holding every query term survive") {
        TTH t = counts_tth({"X", "Y", "Z"}, {{0, 0, 3}, {1, 0, 2}, {0, 1, 4}, {0, 2, 1}, {1, 2, 6}}, 7);
        RankedTTH r = rank_view(t, Width::days(7), 0, {"X", "Y"});
        CHECK(r.intervals() == std::vector<Interval>{0, 2});
        CHECK(rank_view(t, Width::days(7), 0, {"Z"}).rows.empty());
        CHECK(rank_view(t, Width::days(7), 2, {"X", "Y"}).intervals().empty());
        CHECK(error_kind([&] { rank_view(t, Width::days(7), 0, {}); }) == ErrorKind::argument);
        CHECK(error_kind([&] { rank_view(t, Width::days(7), 0, {"Q"}); }) == ErrorKind::lookup);
    }

    TEST_CASE("ranks are permutations ordered by count") {
        Rng rng(43);
        for (int iter = 0; iter < 100; ++iter) {
            RandomCorpus c = random_corpus(rng);
            TTH full = build_tth(c.index, "text", c.index.config.base_grid(), {}, c.categories);
            if (full.empty()) continue;
            const std::string any = full.vocabulary()->term_of(full.rows()[rng.below(full.size())].term);
            RankedTTH r = rank_view(full, Width::days(2), 0, {any});
            std::map<Interval, std::vector<RankedRow>> by;
            for (const auto& row : r.rows) by[row.interval].push_back(row);
            for (auto& [ts, rows] : by) {
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    CHECK(rows[i].rank == static_cast<std::int64_t>(i + 1));
                    if (i > 0) {
                        CHECK(rows[i - 1].count >= rows[i].count);
                        if (rows[i - 1].count == rows[i].count) CHECK(rows[i - 1].term < rows[i].term);
                    }
                }
            }
        }
    }
}

TEST_SUITE("slopes") {
    TEST_CASE("series examples") {
        auto s = find_max_slope({{0, 2}, {1, 5}});
        CHECK(s.max_slope == 3);
        CHECK(s.from == 0);
        CHECK(find_max_slope({{0, 4}, {1, 4}, {2, 4}}).max_slope == 0);
        auto p = find_max_slope({{0, 1}, {1, 4}, {2, 2}, {3, 9}});
        CHECK(p.max_slope == 7);
        CHECK(p.from == 2);
        auto gap = find_max_slope({{0, 3}, {2, 3}});
        CHECK(gap.max_slope == 3);
        CHECK(gap.from == 1);
        CHECK(find_max_slope({{0, 1}, {1, 3}, {2, 5}}).from == 0);
        CHECK(error_kind([] { find_max_slope({{0, 1}}); }) == ErrorKind::argument);
    }
}

TEST_SUITE("tf-idf") {
    TEST_CASE("formula") {
        TTH t = TTH::from_rows(TimeGrid::uniform(kOrigin, 1), {},
                               std::make_shared<const Vocabulary>(std::vector<std::string>{"x", "y"}),
                               {{0, 0, 6, {1, 2}, {}}, {1, 0, 4, {1, 2, 3, 4}, {}}});
        auto rows = tf_idf(t, 5, IntervalTotals{{0, 4}});
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].term == 0);
        CHECK(rows[0].rank == 1);
        CHECK(rows[0].score == doctest::Approx(4.1588830833596715).epsilon(1e-12));
        CHECK(rows[0].df == 2);
        CHECK(rows[0].documents == 4);
        CHECK(rows[1].score == 0);
        CHECK(rows[1].rank == 2);
        CHECK(tf_idf(t, 1, IntervalTotals{{0, 4}}).size() == 1);
        CHECK(error_kind([&] { tf_idf(t, 0); }) == ErrorKind::argument);
    }

    TEST_CASE("top-k matches a brute-force ranking") {
        Rng rng(47);
        for (int iter = 0; iter < 100; ++iter) {
            RandomCorpus c = random_corpus(rng);
            TTH full = build_tth(c.index, "text", c.index.config.base_grid());
            IntervalTotals totals = document_totals(c.index, c.index.config.base_grid());
            const auto k = static_cast<std::int64_t>(1 + rng.below(4));
            std::map<Interval, std::vector<std::pair<double, TermId>>> expect;
            for (const auto& r : full.rows()) {
                const double n = static_cast<double>(totals.at(r.interval));
                const double df = static_cast<double>(r.docs.size());
                expect[r.interval].push_back({-static_cast<double>(r.count) * std::log(n / df), r.term});
            }
            std::vector<std::pair<Interval, TermId>> want;
            for (auto& [ts, v] : expect) {
                std::sort(v.begin(), v.end());
                for (std::size_t i = 0; i < v.size() && i < static_cast<std::size_t>(k); ++i) want.push_back({ts, v[i].second});
            }
            std::vector<std::pair<Interval, TermId>> got;
            for (const auto& r : tf_idf(full, k, totals)) {
                got.push_back({r.interval, r.term});
                CHECK((r.score == 0) == (r.df == r.documents));
            }
            CHECK(got == want);
        }
    }

    TEST_CASE("totals default to the documents seen in the histogram") {
        TTH t = build_tth(fig1_index(), "text", TimeGrid::uniform(kOrigin, 1));
        auto rows = tf_idf(t, 10);
        for (const auto& r : rows) {
            if (r.interval == 2) CHECK(r.score == 0);
        }
        CHECK(document_totals(fig1_index(), TimeGrid::uniform(kOrigin, 1)) == IntervalTotals{{1, 2}, {2, 1}});
    }
}

TEST_SUITE("co-occurrence") {
    TEST_CASE("planted companion is recovered") {
        GenSpec spec;
        spec.num_docs = 400;
        spec.vocab_size = 200;
        spec.intervals = 10;
        spec.doc_length = 30;
        spec.planted = {{50, 3, 4, {}}, {60, 3, 3, {}}};
        CorpusIndex idx = index_of(generated_config(spec), generate_records(spec));
        TTH t = build_tth(idx, "text", TimeGrid::uniform(spec.origin, 1));
        CooccurrenceOptions opt;
        opt.window_days = 1;
        opt.top_intervals = 1;
        opt.k = 1;
        auto res = topic_cooccurrence(t, generated_term(50, 200), opt);
        REQUIRE(res.size() == 1);
        CHECK(res[0].intervals == std::vector<Interval>{3});
        CHECK(res[0].terms == std::vector<std::string>{generated_term(60, 200)});
    }

    TEST_CASE("absent anchors and groups") {
        CorpusIndex idx = index_of(plain_config({"city"}), {record(1, kOrigin, "a b b", {{"city", "NY"}}),
                                                            record(2, kOrigin + 1, "a c", {{"city", "NY"}})});
        TTH t = build_tth(idx, "text", TimeGrid::uniform(kOrigin, 1), {}, {"city"});
        CooccurrenceOptions opt;
        opt.window_days = 1;
        opt.k = 1;
        auto plain = topic_cooccurrence(t, "a", opt);
        opt.group_by = "city";
        auto grouped = topic_cooccurrence(t, "a", opt);
        REQUIRE(plain.size() == 1);
        REQUIRE(grouped.size() == 1);
        CHECK(grouped[0].group == AuxValues{"NY"});
        CHECK(grouped[0].terms == plain[0].terms);
        CHECK(grouped[0].intervals == plain[0].intervals);
        CHECK(plain[0].terms == std::vector<std::string>{"b"});
        TTH no_a = select(t, !Predicate::term_is("a"));
        CHECK(topic_cooccurrence(no_a, "a", opt).empty());
        CHECK(error_kind([&] { topic_cooccurrence(t, "zzz", opt); }) == ErrorKind::lookup);
    }
}

TEST_SUITE("salience") {
    std::vector<std::string> names() {
        return {"t0", "t1", "t2", "f0", "f1", "f2", "f3", "f4", "f5", "f6"};
    }

    TEST_CASE("separated weeks are significant") {
        std::vector<std::tuple<TermId, Interval, Count>> cells;
        for (TermId i = 0; i < 3; ++i) cells.push_back({i, 0, 100 - i});
        for (TermId i = 3; i < 10; ++i) cells.push_back({i, 0, 50 - i});
        for (TermId i = 3; i < 10; ++i) cells.push_back({i, 1, 100 - i});
        for (TermId i = 0; i < 3; ++i) cells.push_back({i, 1, 50 - i});
        TTH t = counts_tth(names(), cells, 7);
        SalienceOptions opt;
        opt.alpha = 0.06;
        auto r = salience(t, {"t0", "t1", "t2"}, opt);
        CHECK(r.extremal == 0);
        REQUIRE(r.weeks.size() == 2);
        CHECK(r.weeks[0].rank_sum == 6);
        CHECK(r.weeks[1].rank_sum == 27);
        REQUIRE(r.comparisons.size() == 1);
        CHECK(r.comparisons[0].test.p_value == doctest::Approx(1.0 / 20).epsilon(1e-12));
        CHECK(r.salient);
    }

    TEST_CASE("identical weeks are not significant") {
        std::vector<std::tuple<TermId, Interval, Count>> cells;
        for (Interval w = 0; w < 2; ++w) {
            for (TermId i = 0; i < 10; ++i) cells.push_back({i, w, 100 - i});
        }
        auto r = salience(counts_tth(names(), cells, 7), {"t0", "t1", "t2"}, {});
        REQUIRE(r.comparisons.size() == 1);
        CHECK(r.comparisons[0].test.p_value == doctest::Approx(0.7).epsilon(1e-12));
        CHECK_FALSE(r.salient);
    }

    TEST_CASE("too few weeks") {
        TTH t = counts_tth(names(), {{0, 0, 5}, {1, 1, 5}}, 7);
        CHECK(error_kind([&] { salience(t, {"t0", "t1"}, {}); }) == ErrorKind::insufficient_data);
    }
}

TEST_SUITE("trendy terms") {
    TEST_CASE("spike is detected") {
        TTH t = counts_tth({"x", "y"}, {{0, 0, 1}, {0, 1, 1}, {0, 2, 1}, {0, 3, 10}, {1, 0, 2}, {1, 1, 2}, {1, 2, 2}, {1, 3, 2}});
        TrendyOptions opt;
        opt.today = kOrigin + 3;
        opt.theta = 5;
        auto r = trendy_terms(t, opt);
        REQUIRE(r.size() == 1);
        CHECK(r[0].text == "x");
        CHECK(r[0].slope == 9);
        CHECK(r[0].interval == 3);
        CHECK(r[0].docs == t.find({0, 3, {}})->docs);
        opt.theta = 9;
        CHECK(trendy_terms(t, opt).empty());
        opt.today = kOrigin - 10;
        opt.theta = 0;
        CHECK(trendy_terms(t, opt).empty());
    }

    TEST_CASE("uniform counts yield nothing") {
        TTH t = counts_tth({"x", "y"}, {{0, 0, 3}, {0, 1, 3}, {1, 0, 3}, {1, 1, 3}});
        TrendyOptions opt;
        opt.today = kOrigin + 1;
        CHECK(trendy_terms(t, opt).empty());
    }

    TEST_CASE("doubling counts needs a doubled threshold") {
        Rng rng(53);
        for (int iter = 0; iter < 100; ++iter) {
            RandomCorpus c = random_corpus(rng);
            TTH full = build_tth(c.index, "text", c.index.config.base_grid());
            std::vector<TTHRow> rows = full.rows();
            for (auto& r : rows) r.count *= 2;
            TTH doubled = full.with_rows(std::move(rows));
            TrendyOptions opt;
            opt.today = kOrigin + c.days;
            opt.theta = static_cast<double>(rng.below(4));
            auto names = [](const std::vector<TrendyTerm>& v) {
                std::vector<std::pair<TermId, double>> out;
                for (const auto& t : v) out.push_back({t.term, t.slope});
                return out;
            };
            auto base = names(trendy_terms(full, opt));
            opt.theta *= 2;
            auto twice = names(trendy_terms(doubled, opt));
            REQUIRE(base.size() == twice.size());
            for (std::size_t i = 0; i < base.size(); ++i) {
                CHECK(base[i].first == twice[i].first);
                CHECK(2 * base[i].second == twice[i].second);
            }
        }
    }
}

TEST_SUITE("synchronized topics") {
    TEST_CASE("identical coverage on one day") {
        std::vector<SourceRecord> recs{
            record(1, kOrigin, "storm flood rain", {{"newspaper", "A"}}),
            record(2, kOrigin, "storm flood rain", {{"newspaper", "B"}}),
            record(3, kOrigin, "market stocks", {{"newspaper", "C"}}),
            record(4, kOrigin + 1, "storm flood rain", {{"newspaper", "A"}}),
            record(5, kOrigin + 2, "storm flood rain", {{"newspaper", "B"}}),
        };
        CorpusIndex idx = index_of(plain_config({"newspaper"}), recs);
        TTH t = build_tth(idx, "text", TimeGrid::uniform(kOrigin, 1), {}, {"newspaper"});
        SyncOptions opt;
        opt.k = 3;
        auto r = synchronized_topics(t, opt);
        REQUIRE(r.size() == 1);
        CHECK(r[0].interval == 0);
        CHECK(r[0].members == std::vector<std::string>{"A", "B"});
        CHECK(r[0].terms == std::vector<std::string>{"flood", "rain", "storm"});
        TTH one = select(t, Predicate::aux_is("newspaper", "A"));
        CHECK(synchronized_topics(one, opt).empty());
        opt.k = 0;
        CHECK(error_kind([&] { synchronized_topics(t, opt); }) == ErrorKind::argument);
    }

    TEST_CASE("jaccard relaxation links near matches") {
        std::vector<SourceRecord> recs{
            record(1, kOrigin, "a b c d", {{"newspaper", "A"}}),
            record(2, kOrigin, "a b c e", {{"newspaper", "B"}}),
        };
        TTH t = build_tth(index_of(plain_config({"newspaper"}), recs), "text", TimeGrid::uniform(kOrigin, 1), {},
                          {"newspaper"});
        SyncOptions opt;
        opt.k = 4;
        CHECK(synchronized_topics(t, opt).empty());
        opt.min_jaccard = 0.6;
        auto r = synchronized_topics(t, opt);
        REQUIRE(r.size() == 1);
        CHECK(r[0].terms == std::vector<std::string>{"a", "b", "c"});
    }
}

TEST_SUITE("generator") {
    TEST_CASE("deterministic per seed") {
        GenSpec spec;
        spec.num_docs = 50;
        spec.vocab_size = 40;
        auto a = generate_records(spec);
        auto b = generate_records(spec);
        CHECK(a.size() == 50);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].fields == b[i].fields);
        spec.seed = 2;
        CHECK(generate_records(spec)[0].fields != a[0].fields);
        CHECK(generated_term(7, 40) == "t0007");
        CHECK(generated_term(7, 100000) == "t00007");
    }

    TEST_CASE("flat exponent gives a uniform vocabulary") {
        GenSpec spec;
        spec.num_docs = 200;
        spec.vocab_size = 10;
        spec.zipf_s = 0;
        spec.doc_length = 50;
        std::vector<std::int64_t> counts(10);
        for (const auto& r : generate_records(spec)) {
            for (const auto& tok : tokenize(r.fields.at("text"), generated_config(spec))) counts[std::stoul(tok.substr(1))]++;
        }
        // 99th percentile of chi-square with 9 degrees of freedom.
        CHECK(chi_square_uniform(counts) < 21.665994333461924);
    }

    TEST_CASE("planted term tops its interval") {
        GenSpec spec;
        spec.num_docs = 300;
        spec.vocab_size = 500;
        spec.intervals = 6;
        spec.planted = {{250, 4, 10, {}}};
        CorpusIndex idx = index_of(generated_config(spec), generate_records(spec));
        TTH t = build_tth(idx, "text", TimeGrid::uniform(spec.origin, 1));
        auto best = FunctionRegistry::builtins().apply_arg(select(t, Predicate::interval(CmpOp::eq, 4)),
                                                           parse_function_call("max"));
        REQUIRE(best.size() == 1);
        CHECK(t.vocabulary()->term_of(best[0].keys[0].term) == generated_term(250, 500));
    }

    TEST_CASE("clones and aux values") {
        GenSpec spec = parse_gen_spec(R"({"num_docs": 20, "vocab_size": 30, "aux": {"paper": ["A", "B", "C"]},
                                         "clone": {"attribute": "paper", "from": "A", "to": ["B"]}})");
        auto recs = generate_records(spec);
        CHECK(recs.size() > 20);
        for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
            if (recs[i].fields.at("paper") == "A" && recs[i + 1].fields.at("paper") == "B" &&
                recs[i + 1].fields.at("date") == recs[i].fields.at("date")) {
                CHECK(recs[i + 1].fields.at("text") == recs[i].fields.at("text"));
            }
        }
    }

    TEST_CASE("invalid specs") {
        GenSpec spec;
        spec.vocab_size = 10;
        spec.planted = {{10, 0, 10, {}}};
        CHECK(error_kind([&] { generate_records(spec); }) == ErrorKind::argument);
        CHECK(error_kind([] { parse_gen_spec(R"({"bogus": 1})"); }) == ErrorKind::schema);
        CHECK(error_kind([] { parse_gen_spec("{"); }) == ErrorKind::parse);
        CHECK(error_kind([] { parse_gen_spec(R"({"vocab_size": "many"})"); }) == ErrorKind::schema);
    }
}
