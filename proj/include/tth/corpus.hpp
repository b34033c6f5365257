#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tth/config.hpp"
#include "tth/date.hpp"
#include "tth/records.hpp"
#include "tth/time_grid.hpp"

namespace tth {

using TermId = std::uint32_t;
using DocId = std::int64_t;
using Count = std::int64_t;
/// Sorted, duplicate-free list of document ids.
using DocList = std::vector<DocId>;
/// Auxiliary attribute values, positionally matching an aux schema.
using AuxValues = std::vector<std::string>;

struct Document {
    DocId id = 0;
    Date date;
    std::map<std::string, std::string> fields;  // term-index field -> text
    std::map<std::string, std::string> aux;     // category -> value
};

struct Corpus {
    MappingConfig config;
    std::vector<Document> documents;  // ascending id
};

/// Validates and converts raw records. Missing fields raise schema errors naming the
/// field and record, bad timestamps/ids raise parse errors, duplicate ids raise
/// conflict errors, and documents dated before the grid origin raise range errors.
Corpus load_corpus(const MappingConfig& config, std::span<const SourceRecord> records);
Corpus load_corpus_file(const MappingConfig& config, const std::filesystem::path& path);

/// Bijection between term strings and dense ids 0..size-1.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(const std::vector<std::string>& terms);

    /// Returns the id of `term`, adding it if new.
    TermId intern(const std::string& term);

    std::optional<TermId> find(const std::string& term) const;
    /// Throws lookup error for unknown terms.
    TermId lookup(const std::string& term) const;
    /// Throws lookup error for ids out of range.
    const std::string& term_of(TermId id) const;

    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }

    bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, TermId> ids_;
};

struct TermCount {
    TermId term = 0;
    Count count = 0;
    bool operator==(const TermCount&) const = default;
};

/// Per-document (term, count) table; rows ascend by term id.
struct DocumentHistogram {
    DocId doc_id = 0;
    Interval ts = 0;
    std::vector<TermCount> rows;

    Count total() const;
    bool operator==(const DocumentHistogram&) const = default;
};

struct Posting {
    DocId doc = 0;
    Count count = 0;
    bool operator==(const Posting&) const = default;
};

/// Forward index: occurrence count of each term in each document.
class TermDocFrequency {
public:
    TermDocFrequency() = default;

    static TermDocFrequency from_histograms(std::span<const DocumentHistogram> histograms,
                                            std::size_t vocabulary_size);

    struct Entry {
        TermId term;
        DocId doc;
        Count count;
    };
    /// Entries in any order; duplicates raise conflict errors, counts must be >= 1.
    static TermDocFrequency from_entries(std::vector<Entry> entries, std::size_t vocabulary_size);

    std::optional<Count> find(TermId term, DocId doc) const;
    /// Zero when the pair is absent.
    Count frequency(TermId term, DocId doc) const;
    /// Postings of `term`, ascending by document.
    std::span<const Posting> postings(TermId term) const;

    std::size_t term_count() const noexcept { return postings_.size(); }
    std::size_t entry_count() const noexcept { return entries_; }

    bool operator==(const TermDocFrequency&) const = default;

private:
    std::vector<std::vector<Posting>> postings_;
    std::size_t entries_ = 0;
};

/// Vocabulary, document histograms and forward index of one term-index field.
struct FieldIndex {
    std::string field;
    std::shared_ptr<const Vocabulary> vocabulary;
    std::vector<DocumentHistogram> histograms;  // ascending doc id
    std::shared_ptr<const TermDocFrequency> forward;
};

/// Tokenizes `field` of every document. Unknown fields raise schema errors.
FieldIndex build_indexes(const Corpus& corpus, const std::string& field);

/// Rebuilds document histograms from a forward index (used after loading from disk).
std::vector<DocumentHistogram> histograms_from_forward(const TermDocFrequency& forward,
                                                       const std::vector<std::pair<DocId, Interval>>& docs);

/// Time and category values of a document, without its text.
struct DocumentMeta {
    DocId id = 0;
    Date date;
    AuxValues aux;  // ordered as MappingConfig::category_fields
    bool operator==(const DocumentMeta&) const = default;
};

/// Everything TTH construction needs: document metadata plus one FieldIndex per
/// term-index field. Immutable once built.
struct CorpusIndex {
    MappingConfig config;
    std::vector<DocumentMeta> documents;  // ascending id
    std::map<std::string, FieldIndex> fields;

    const FieldIndex& field(const std::string& name) const;
    const DocumentMeta* find_document(DocId id) const;
    std::size_t category_position(const std::string& category) const;
};

CorpusIndex index_corpus(const Corpus& corpus);

}  // namespace tth
