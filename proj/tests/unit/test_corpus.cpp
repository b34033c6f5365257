#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "tth/error.hpp"
#include "tth/tokenizer.hpp"

using namespace tth;
using namespace tth::testing;

namespace {

std::vector<std::pair<std::string, Count>> rows_of(const FieldIndex& f, const DocumentHistogram& h) {
    std::vector<std::pair<std::string, Count>> out;
    for (const auto& r : h.rows) out.emplace_back(f.vocabulary->term_of(r.term), r.count);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("tokenizer") {
    TEST_CASE("figure text splits into single letters") {
        Tokenizer t(TokenizerOptions{false, {}, {}});
        CHECK(t("A B C B") == std::vector<std::string>{"A", "B", "C", "B"});
    }

    TEST_CASE("empty text gives no tokens") { CHECK(Tokenizer()("").empty()); }

    TEST_CASE("phrases match greedily before splitting") {
        // Reference value from tests/oracles/derived_values.py.
        Tokenizer t(TokenizerOptions{true, {}, {"tax cut"}});
        CHECK(t("Tax Cut, tax-cut") == std::vector<std::string>{"tax cut", "tax", "cut"});
    }

    TEST_CASE("lowercasing, punctuation and stopwords") {
        Tokenizer t(TokenizerOptions{true, {"the"}, {}});
        CHECK(t("The cat's hat; THE end") == std::vector<std::string>{"cat", "s", "hat", "end"});
    }

    TEST_CASE("longest phrase wins") {
        Tokenizer t(TokenizerOptions{true, {}, {"new york", "new york times"}});
        CHECK(t("New York Times and new york") == std::vector<std::string>{"new york times", "and", "new york"});
    }

    TEST_CASE("utf-8 words stay whole") {
        Tokenizer t(TokenizerOptions{true, {}, {}});
        CHECK(t("caf\xc3\xa9 au lait") == std::vector<std::string>{"caf\xc3\xa9", "au", "lait"});
    }
}

TEST_SUITE("config") {
    TEST_CASE("parses keys and resolves defaults") {
        MappingConfig c = parse_mapping_config(R"({"corpus":"news","term_index":["body"],"categories":["paper"],
            "grid_origin":"2017-01-01","grid_width_days":7,"stopwords":["The"]})");
        CHECK(c.corpus_name == "news");
        CHECK(c.id_field == "id");
        CHECK(c.temporal_field == "date");
        CHECK(c.grid_width_days == 7);
        CHECK(c.stopwords.count("the") == 1);
        CHECK(c.base_grid() == TimeGrid::uniform(Date::from_ymd(2017, 1, 1), 7));
    }

    TEST_CASE("round-trips through JSON") {
        MappingConfig c = plain_config({"city"}, 3);
        c.stopwords = {"a", "b"};
        c.phrases = {"x y"};
        MappingConfig back = parse_mapping_config(to_json(c));
        CHECK(to_json(back) == to_json(c));
    }

    TEST_CASE("duplicate field names are schema errors") {
        CHECK(error_kind([] { parse_mapping_config(R"({"term_index":["id"]})"); }) == ErrorKind::schema);
        CHECK(error_kind([] { parse_mapping_config(R"({"term_index":["text"],"categories":["text"]})"); }) ==
              ErrorKind::schema);
    }

    TEST_CASE("non-positive width is an argument error") {
        CHECK(error_kind([] { parse_mapping_config(R"({"term_index":["t"],"grid_width_days":0})"); }) ==
              ErrorKind::argument);
    }
}

TEST_SUITE("records") {
    TEST_CASE("jsonl keeps scalars in their JSON spelling") {
        std::istringstream in("{\"id\":7,\"date\":\"2017-01-02\",\"flag\":true}\n\n");
        auto recs = read_jsonl_records(in);
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].fields.at("id") == "7");
        CHECK(recs[0].fields.at("flag") == "true");
    }

    TEST_CASE("nested jsonl values are parse errors naming the line") {
        std::istringstream in("{\"id\":1}\n{\"id\":[1]}\n");
        try {
            read_jsonl_records(in);
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::parse);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    TEST_CASE("csv handles quotes, separators and embedded newlines") {
        std::istringstream in("id,text\n1,\"a, \"\"b\"\"\nc\"\n2,plain\n");
        auto recs = read_csv_records(in);
        REQUIRE(recs.size() == 2);
        CHECK(recs[0].fields.at("text") == "a, \"b\"\nc");
        CHECK(recs[1].fields.at("text") == "plain");
        CHECK(csv_escape("a,b") == "\"a,b\"");
        CHECK(csv_escape("x\"y") == "\"x\"\"y\"");
    }
}

TEST_SUITE("corpus") {
    TEST_CASE("figure corpus loads three documents on intervals 1, 1, 2") {
        CorpusIndex idx = fig1_index();
        REQUIRE(idx.documents.size() == 3);
        const TimeGrid g = idx.config.base_grid();
        CHECK(*g.interval_of(idx.documents[0].date) == 1);
        CHECK(*g.interval_of(idx.documents[1].date) == 1);
        CHECK(*g.interval_of(idx.documents[2].date) == 2);
        CHECK(idx.field("text").vocabulary->size() == 5);
    }

    TEST_CASE("document histograms match the figure") {
        CorpusIndex idx = fig1_index();
        const FieldIndex& f = idx.field("text");
        using R = std::vector<std::pair<std::string, Count>>;
        CHECK(rows_of(f, f.histograms[0]) == R{{"A", 1}, {"B", 2}, {"C", 1}});
        CHECK(rows_of(f, f.histograms[1]) == R{{"A", 2}, {"C", 1}, {"D", 1}});
        CHECK(rows_of(f, f.histograms[2]) == R{{"A", 1}, {"B", 1}, {"D", 1}, {"E", 1}});
        CHECK(f.histograms[2].ts == 2);
    }

    TEST_CASE("empty source gives an empty corpus and vocabulary") {
        CorpusIndex idx = index_of(plain_config(), {});
        CHECK(idx.documents.empty());
        CHECK(idx.field("text").vocabulary->size() == 0);
        CHECK(idx.field("text").forward->entry_count() == 0);
    }

    TEST_CASE("single token document") {
        CorpusIndex idx = index_of(plain_config(), {record(1, kOrigin, "x")});
        CHECK(idx.field("text").vocabulary->size() == 1);
        REQUIRE(idx.field("text").histograms[0].rows.size() == 1);
        CHECK(idx.field("text").histograms[0].rows[0].count == 1);
    }

    TEST_CASE("load errors") {
        MappingConfig c = plain_config({"city"});
        SourceRecord missing = record(1, kOrigin, "a");
        missing.fields.erase("date");
        try {
            load_corpus(c, std::vector<SourceRecord>{missing});
            FAIL("expected a schema error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::schema);
            CHECK(std::string(e.what()).find("date") != std::string::npos);
        }
        SourceRecord bad_date = record(1, kOrigin, "a", {{"city", "x"}});
        bad_date.fields["date"] = "2017-13-01";
        CHECK(error_kind([&] { load_corpus(c, std::vector<SourceRecord>{bad_date}); }) == ErrorKind::parse);
        std::vector<SourceRecord> dup{record(1, kOrigin, "a", {{"city", "x"}}), record(1, kOrigin, "b", {{"city", "y"}})};
        CHECK(error_kind([&] { load_corpus(c, dup); }) == ErrorKind::conflict);
        std::vector<SourceRecord> early{record(1, kOrigin - 1, "a", {{"city", "x"}})};
        CHECK(error_kind([&] { load_corpus(c, early); }) == ErrorKind::range);
    }

    TEST_CASE("unknown field is a schema error") {
        Corpus corpus = load_corpus(plain_config(), std::vector<SourceRecord>{record(1, kOrigin, "a")});
        CHECK(error_kind([&] { build_indexes(corpus, "body"); }) == ErrorKind::schema);
    }

    TEST_CASE("index invariants on random corpora") {
        Rng rng(1);
        for (int iter = 0; iter < 100; ++iter) {
            RandomCorpus c = random_corpus(rng);
            const FieldIndex& f = c.index.field("text");
            for (std::size_t i = 0; i < c.docs.size(); ++i) {
                const auto& h = f.histograms[i];
                CHECK(h.total() == static_cast<Count>(c.docs[i].tokens.size()));
                for (const auto& r : h.rows) {
                    CHECK(r.count >= 1);
                    CHECK(f.forward->frequency(r.term, h.doc_id) == r.count);
                }
            }
            std::size_t rows = 0;
            for (const auto& h : f.histograms) rows += h.rows.size();
            CHECK(f.forward->entry_count() == rows);
            for (TermId t = 0; t < f.vocabulary->size(); ++t) CHECK(f.vocabulary->lookup(f.vocabulary->term_of(t)) == t);
        }
    }
}
