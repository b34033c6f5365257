#include "tth/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "tth/error.hpp"
#include "tth/tokenizer.hpp"

namespace tth {

namespace {

std::string record_label(const SourceRecord& rec, const MappingConfig& config) {
    std::string label = "record at line " + std::to_string(rec.line);
    if (auto it = rec.fields.find(config.id_field); it != rec.fields.end()) {
        label += " (id " + it->second + ")";
    }
    return label;
}

const std::string& required(const SourceRecord& rec, const MappingConfig& config, const std::string& name) {
    auto it = rec.fields.find(name);
    if (it == rec.fields.end()) {
        fail(ErrorKind::schema, record_label(rec, config) + " is missing field '" + name + "'");
    }
    return it->second;
}

DocId parse_doc_id(const std::string& text, const SourceRecord& rec, const MappingConfig& config) {
    DocId id = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(ErrorKind::parse, record_label(rec, config) + ": document id '" + text + "' is not an integer");
    }
    return id;
}

}  // namespace

Corpus load_corpus(const MappingConfig& config, std::span<const SourceRecord> records) {
    config.validate();
    Corpus corpus;
    corpus.config = config;
    corpus.documents.reserve(records.size());
    std::set<DocId> seen;
    for (const auto& rec : records) {
        Document doc;
        doc.id = parse_doc_id(required(rec, config, config.id_field), rec, config);
        const std::string& ts = required(rec, config, config.temporal_field);
        try {
            doc.date = parse_date(ts, config.temporal_format);
        } catch (const Error& e) {
            fail(ErrorKind::parse, record_label(rec, config) + ": " + e.what());
        }
        if (doc.date < config.grid_origin) {
            fail(ErrorKind::range, record_label(rec, config) + ": timestamp " + format_date(doc.date) +
                                       " precedes grid origin " + format_date(config.grid_origin));
        }
        for (const auto& field : config.term_index_fields) {
            doc.fields[field] = required(rec, config, field);
        }
        for (const auto& category : config.category_fields) {
            doc.aux[category] = required(rec, config, category);
        }
        if (!seen.insert(doc.id).second) {
            fail(ErrorKind::conflict, record_label(rec, config) + ": duplicate document id " +
                                          std::to_string(doc.id));
        }
        corpus.documents.push_back(std::move(doc));
    }
    std::stable_sort(corpus.documents.begin(), corpus.documents.end(),
                     [](const Document& a, const Document& b) { return a.id < b.id; });
    return corpus;
}

Corpus load_corpus_file(const MappingConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::io, "cannot open corpus " + path.string());
    }
    auto records = read_records(in, format_for_path(path.string()));
    return load_corpus(config, records);
}

Vocabulary::Vocabulary(const std::vector<std::string>& terms) {
    for (const auto& t : terms) {
        if (find(t)) {
            fail(ErrorKind::conflict, "duplicate vocabulary term '" + t + "'");
        }
        intern(t);
    }
}

TermId Vocabulary::intern(const std::string& term) {
    auto [it, inserted] = ids_.try_emplace(term, static_cast<TermId>(terms_.size()));
    if (inserted) {
        terms_.push_back(term);
    }
    return it->second;
}

std::optional<TermId> Vocabulary::find(const std::string& term) const {
    auto it = ids_.find(term);
    if (it == ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

TermId Vocabulary::lookup(const std::string& term) const {
    auto id = find(term);
    if (!id) {
        fail(ErrorKind::lookup, "term '" + term + "' is not in the vocabulary");
    }
    return *id;
}

const std::string& Vocabulary::term_of(TermId id) const {
    if (id >= terms_.size()) {
        fail(ErrorKind::lookup, "term id " + std::to_string(id) + " is not in the vocabulary");
    }
    return terms_[id];
}

Count DocumentHistogram::total() const {
    Count total = 0;
    for (const auto& r : rows) {
        total += r.count;
    }
    return total;
}

TermDocFrequency TermDocFrequency::from_histograms(std::span<const DocumentHistogram> histograms,
                                                   std::size_t vocabulary_size) {
    std::vector<Entry> entries;
    for (const auto& h : histograms) {
        for (const auto& r : h.rows) {
            entries.push_back(Entry{r.term, h.doc_id, r.count});
        }
    }
    return from_entries(std::move(entries), vocabulary_size);
}

TermDocFrequency TermDocFrequency::from_entries(std::vector<Entry> entries, std::size_t vocabulary_size) {
    TermDocFrequency tdf;
    tdf.postings_.resize(vocabulary_size);
    for (const auto& e : entries) {
        if (e.term >= vocabulary_size) {
            fail(ErrorKind::lookup, "forward index term id " + std::to_string(e.term) + " out of range");
        }
        if (e.count < 1) {
            fail(ErrorKind::parse, "forward index counts must be >= 1");
        }
        tdf.postings_[e.term].push_back(Posting{e.doc, e.count});
    }
    for (std::size_t t = 0; t < tdf.postings_.size(); ++t) {
        auto& list = tdf.postings_[t];
        std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
        for (std::size_t i = 1; i < list.size(); ++i) {
            if (list[i].doc == list[i - 1].doc) {
                fail(ErrorKind::conflict, "duplicate forward index entry for term " + std::to_string(t) +
                                              ", document " + std::to_string(list[i].doc));
            }
        }
        tdf.entries_ += list.size();
    }
    return tdf;
}

std::optional<Count> TermDocFrequency::find(TermId term, DocId doc) const {
    if (term >= postings_.size()) {
        return std::nullopt;
    }
    const auto& list = postings_[term];
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](const Posting& p, DocId d) { return p.doc < d; });
    if (it == list.end() || it->doc != doc) {
        return std::nullopt;
    }
    return it->count;
}

Count TermDocFrequency::frequency(TermId term, DocId doc) const { return find(term, doc).value_or(0); }

std::span<const Posting> TermDocFrequency::postings(TermId term) const {
    if (term >= postings_.size()) {
        return {};
    }
    return postings_[term];
}

FieldIndex build_indexes(const Corpus& corpus, const std::string& field) {
    if (!corpus.config.is_term_index_field(field)) {
        fail(ErrorKind::schema, "'" + field + "' is not a declared term_index field");
    }
    const Tokenizer tokenizer(tokenizer_options(corpus.config));
    const TimeGrid grid = corpus.config.base_grid();
    auto vocabulary = std::make_shared<Vocabulary>();
    FieldIndex index;
    index.field = field;
    index.histograms.reserve(corpus.documents.size());
    std::map<TermId, Count> counts;
    for (const auto& doc : corpus.documents) {
        counts.clear();
        auto it = doc.fields.find(field);
        if (it != doc.fields.end()) {
            for (const auto& term : tokenizer(it->second)) {
                ++counts[vocabulary->intern(term)];
            }
        }
        DocumentHistogram h;
        h.doc_id = doc.id;
        h.ts = *grid.interval_of(doc.date);
        h.rows.reserve(counts.size());
        for (const auto& [term, count] : counts) {
            h.rows.push_back(TermCount{term, count});
        }
        index.histograms.push_back(std::move(h));
    }
    index.forward = std::make_shared<const TermDocFrequency>(
        TermDocFrequency::from_histograms(index.histograms, vocabulary->size()));
    index.vocabulary = std::move(vocabulary);
    return index;
}

std::vector<DocumentHistogram> histograms_from_forward(const TermDocFrequency& forward,
                                                       const std::vector<std::pair<DocId, Interval>>& docs) {
    std::vector<DocumentHistogram> out;
    out.reserve(docs.size());
    std::unordered_map<DocId, std::size_t> position;
    for (const auto& [id, ts] : docs) {
        position.emplace(id, out.size());
        out.push_back(DocumentHistogram{id, ts, {}});
    }
    for (TermId t = 0; t < forward.term_count(); ++t) {
        for (const auto& p : forward.postings(t)) {
            auto it = position.find(p.doc);
            if (it == position.end()) {
                fail(ErrorKind::dependency, "forward index references unknown document " + std::to_string(p.doc));
            }
            out[it->second].rows.push_back(TermCount{t, p.count});
        }
    }
    return out;
}

const FieldIndex& CorpusIndex::field(const std::string& name) const {
    auto it = fields.find(name);
    if (it == fields.end()) {
        fail(ErrorKind::schema, "'" + name + "' is not an indexed field");
    }
    return it->second;
}

const DocumentMeta* CorpusIndex::find_document(DocId id) const {
    auto it = std::lower_bound(documents.begin(), documents.end(), id,
                               [](const DocumentMeta& d, DocId v) { return d.id < v; });
    if (it == documents.end() || it->id != id) {
        return nullptr;
    }
    return &*it;
}

std::size_t CorpusIndex::category_position(const std::string& category) const {
    const auto& cats = config.category_fields;
    auto it = std::find(cats.begin(), cats.end(), category);
    if (it == cats.end()) {
        fail(ErrorKind::schema, "'" + category + "' is not a declared category");
    }
    return static_cast<std::size_t>(it - cats.begin());
}

CorpusIndex index_corpus(const Corpus& corpus) {
    CorpusIndex index;
    index.config = corpus.config;
    index.documents.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        DocumentMeta meta{doc.id, doc.date, {}};
        for (const auto& category : corpus.config.category_fields) {
            meta.aux.push_back(doc.aux.at(category));
        }
        index.documents.push_back(std::move(meta));
    }
    for (const auto& field : corpus.config.term_index_fields) {
        index.fields.emplace(field, build_indexes(corpus, field));
    }
    return index;
}

}  // namespace tth
