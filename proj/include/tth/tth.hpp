#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tth/corpus.hpp"
#include "tth/time_grid.hpp"

namespace tth {

/// Identity of a TTH row: (term, interval, aux values).
struct RowKey {
    TermId term = 0;
    Interval interval = 0;
    AuxValues aux;

    auto operator<=>(const RowKey&) const = default;
    bool operator==(const RowKey&) const = default;
};

/// One cell of a temporal term histogram.
struct TTHRow {
    TermId term = 0;
    Interval interval = 0;
    Count count = 0;   // total occurrences over `docs`
    DocList docs;      // contributing documents, ascending
    AuxValues aux;

    RowKey key() const { return RowKey{term, interval, aux}; }
    bool operator==(const TTHRow&) const = default;
};

/// Strict-weak order on (term, interval, aux) used for storage and tie-breaking.
bool key_less(const TTHRow& a, const TTHRow& b);
int compare_keys(const TTHRow& a, const TTHRow& b);

/// Temporal term histogram: sparse rows keyed by (term, interval, aux), stored in key
/// order. Values are immutable; operators return new histograms.
///
/// The vocabulary is shared and required. The forward index is optional; merges of
/// histograms whose document lists overlap need it.
class TTH {
public:
    TTH() = default;
    TTH(TimeGrid grid, std::vector<std::string> aux_schema, std::shared_ptr<const Vocabulary> vocabulary,
        std::shared_ptr<const TermDocFrequency> forward = {}, std::string field = {});

    /// Validates and sorts `rows`: aux arity, count >= |docs| >= 1, sorted unique doc
    /// lists, unique keys (conflict error otherwise).
    static TTH from_rows(TimeGrid grid, std::vector<std::string> aux_schema,
                         std::shared_ptr<const Vocabulary> vocabulary, std::vector<TTHRow> rows,
                         std::shared_ptr<const TermDocFrequency> forward = {}, std::string field = {});

    /// Same metadata, different rows. `rows` must already be valid and key-sorted.
    TTH with_rows(std::vector<TTHRow> rows) const;
    /// Same metadata on another grid.
    TTH with_grid(TimeGrid grid, std::vector<TTHRow> rows) const;
    /// Empty histogram with the same metadata.
    TTH empty_like() const { return with_rows({}); }

    const TimeGrid& grid() const noexcept { return grid_; }
    const std::vector<std::string>& aux_schema() const noexcept { return aux_schema_; }
    const std::shared_ptr<const Vocabulary>& vocabulary() const noexcept { return vocabulary_; }
    const std::shared_ptr<const TermDocFrequency>& forward() const noexcept { return forward_; }
    const std::string& field() const noexcept { return field_; }

    const std::vector<TTHRow>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    Count total_count() const;

    const TTHRow* find(const RowKey& key) const;
    /// Position of `name` in the aux schema, or schema error.
    std::size_t aux_position(const std::string& name) const;

    const std::string& term_string(TermId id) const { return vocabulary_->term_of(id); }

    /// Equal grid, aux schema and rows. Term ids are compared as ids, so both sides
    /// must use the same vocabulary for the comparison to be meaningful.
    bool operator==(const TTH& other) const;

private:
    TimeGrid grid_;
    std::vector<std::string> aux_schema_;
    std::shared_ptr<const Vocabulary> vocabulary_;
    std::shared_ptr<const TermDocFrequency> forward_;
    std::string field_;
    std::vector<TTHRow> rows_;
};

struct TermThreshold {
    std::string term;
    Count min_count = 1;  // the document must contain `term` at least this often
};

/// Which documents contribute to an ad hoc build.
struct BuildPredicate {
    std::optional<Date> start;  // inclusive
    std::optional<Date> end;    // exclusive
    std::vector<std::pair<std::string, std::string>> aux_equals;  // category = value
    std::vector<TermThreshold> term_thresholds;
};

/// Aggregates the forward index of `field` over documents passing `filter`, grouped by
/// (term, grid interval, aux_schema values). Documents outside an explicit grid's span
/// are skipped.
///
/// Uniform grids must have a width that is a multiple of the corpus base width and an
/// origin on the base grid; explicit boundaries must fall on base boundaries.
TTH build_tth(const CorpusIndex& index, const std::string& field, const TimeGrid& grid,
              const BuildPredicate& filter = {}, const std::vector<std::string>& aux_schema = {});

/// Whether a document passes `filter` (shared by the ad hoc builder and its tests).
bool passes(const BuildPredicate& filter, const CorpusIndex& index, const FieldIndex& field,
            const DocumentMeta& doc);

/// Dense enumeration of `terms` x [first, last] for every aux combination present in
/// `tth`, in key order. Missing cells come back with count 0 and no documents.
/// Unknown terms raise lookup errors.
std::vector<TTHRow> dense_view(const TTH& tth, const std::vector<std::string>& terms, Interval first,
                               Interval last);

/// Stored rows for `keys`, in key order. Absent keys raise one absent-row error that
/// lists all of them.
std::vector<TTHRow> get_records(const TTH& tth, std::span<const RowKey> keys);

/// Human-readable key, e.g. "(B, 1, [NY])".
std::string describe_key(const TTH& tth, const RowKey& key);

}  // namespace tth
