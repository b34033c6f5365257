#include "fixtures.hpp"

#include <algorithm>
#include <functional>

namespace tth::testing {

MappingConfig plain_config(std::vector<std::string> categories, std::int64_t width) {
    MappingConfig c;
    c.corpus_name = "test";
    c.term_index_fields = {"text"};
    c.category_fields = std::move(categories);
    c.lowercase = false;
    c.grid_origin = kOrigin;
    c.grid_width_days = width;
    return c;
}

SourceRecord record(DocId id, Date date, const std::string& text, const std::map<std::string, std::string>& aux) {
    SourceRecord r;
    r.line = static_cast<std::size_t>(id);
    r.fields = aux;
    r.fields["id"] = std::to_string(id);
    r.fields["date"] = format_date(date);
    r.fields["text"] = text;
    return r;
}

CorpusIndex index_of(const MappingConfig& config, const std::vector<SourceRecord>& records) {
    return index_corpus(load_corpus(config, records));
}

CorpusIndex fig1_index() {
    return index_of(plain_config(), {record(1, kOrigin + 1, "A B C B"), record(2, kOrigin + 1, "D C A A"),
                                     record(3, kOrigin + 2, "A E D B")});
}

namespace {

std::shared_ptr<const Vocabulary> fig2_vocabulary() {
    static auto v = std::make_shared<const Vocabulary>(std::vector<std::string>{"A", "B", "C"});
    return v;
}

TTH fig2(std::vector<TTHRow> rows) {
    return TTH::from_rows(TimeGrid::uniform(kOrigin, 1), {}, fig2_vocabulary(), std::move(rows));
}

}  // namespace

TTH fig2_left() {
    return fig2({{0, 1, 2, {1, 2}, {}}, {0, 2, 3, {1, 3}, {}}, {1, 1, 4, {2, 3, 4}, {}}, {1, 2, 1, {4}, {}}});
}

TTH fig2_middle() {
    return fig2({{0, 1, 3, {5, 6}, {}}, {1, 1, 2, {5}, {}}, {1, 2, 1, {6}, {}}, {2, 2, 1, {5}, {}}});
}

std::vector<TTHRow> fig2_merged_rows() {
    return {{0, 1, 5, {1, 2, 5, 6}, {}},
            {0, 2, 3, {1, 3}, {}},
            {1, 1, 6, {2, 3, 4, 5}, {}},
            {1, 2, 2, {4, 6}, {}},
            {2, 2, 1, {5}, {}}};
}

RandomCorpus random_corpus(Rng& rng, const CorpusShape& shape) {
    RandomCorpus c;
    const std::size_t n_aux = rng.below(shape.max_aux + 1);
    for (std::size_t a = 0; a < n_aux; ++a) c.categories.push_back("c" + std::to_string(a));
    const std::size_t n_terms = 1 + rng.below(shape.max_terms);
    c.days = rng.between(1, shape.max_intervals);
    const std::size_t n_docs = rng.below(shape.max_docs + 1);
    DocId id = 0;
    std::vector<SourceRecord> records;
    for (std::size_t i = 0; i < n_docs; ++i) {
        RawDoc d;
        id += rng.between(1, 3);
        d.id = id;
        d.day = rng.between(0, c.days - 1);
        std::map<std::string, std::string> aux;
        for (const auto& cat : c.categories) {
            d.aux.push_back("v" + std::to_string(rng.below(3)));
            aux[cat] = d.aux.back();
        }
        const std::size_t len = rng.below(9);
        std::string text;
        for (std::size_t t = 0; t < len; ++t) {
            d.tokens.push_back("t" + std::to_string(rng.below(n_terms)));
            text += (t ? " " : "") + d.tokens.back();
        }
        records.push_back(record(d.id, kOrigin + d.day, text, aux));
        c.docs.push_back(std::move(d));
    }
    c.index = index_of(plain_config(c.categories), records);
    return c;
}

BruteRows brute_build(const RandomCorpus& c, std::int64_t width, const std::vector<std::size_t>& aux_positions) {
    return brute_build(c, width, aux_positions, [](const RawDoc&) { return true; });
}

BruteRows to_brute(const TTH& tth) {
    BruteRows out;
    for (const auto& r : tth.rows()) {
        BruteCell cell{r.count, std::set<DocId>(r.docs.begin(), r.docs.end())};
        out.emplace(BruteKey{tth.term_string(r.term), r.interval, r.aux}, std::move(cell));
    }
    return out;
}

std::map<std::string, BruteCell> brute_marginal(const BruteRows& rows, Axis retained) {
    std::map<std::string, BruteCell> out;
    for (const auto& [key, cell] : rows) {
        const std::string k = retained == Axis::term ? std::get<0>(key) : std::to_string(std::get<1>(key));
        auto& m = out[k];
        m.count += cell.count;
        m.docs.insert(cell.docs.begin(), cell.docs.end());
    }
    return out;
}

std::map<std::string, BruteCell> to_brute(const Marginal1D& m, const TTH& context) {
    std::map<std::string, BruteCell> out;
    for (const auto& r : m.rows) {
        const std::string k = m.axis == Axis::term ? context.term_string(static_cast<TermId>(r.value))
                                                   : std::to_string(r.value);
        out[k] = BruteCell{r.count, std::set<DocId>(r.docs.begin(), r.docs.end())};
    }
    return out;
}

namespace {

double pairwise_u(const std::vector<double>& x, const std::vector<double>& y) {
    double u = 0;
    for (double a : x) {
        for (double b : y) u += a > b ? 1.0 : a == b ? 0.5 : 0.0;
    }
    return u;
}

}  // namespace

double enumerate_u_less(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> pooled = x;
    pooled.insert(pooled.end(), y.begin(), y.end());
    const double observed = pairwise_u(x, y);
    const std::size_t n = pooled.size(), k = x.size();
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    std::size_t hits = 0, total = 0;
    do {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i) (pick[i] ? a : b).push_back(pooled[i]);
        ++total;
        if (pairwise_u(a, b) <= observed + 1e-9) ++hits;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace tth::testing
