#include "tth/tth.hpp"

#include <algorithm>
#include <set>

#include "tth/error.hpp"

namespace tth {

int compare_keys(const TTHRow& a, const TTHRow& b) {
    if (a.term != b.term) {
        return a.term < b.term ? -1 : 1;
    }
    if (a.interval != b.interval) {
        return a.interval < b.interval ? -1 : 1;
    }
    if (a.aux != b.aux) {
        return a.aux < b.aux ? -1 : 1;
    }
    return 0;
}

bool key_less(const TTHRow& a, const TTHRow& b) { return compare_keys(a, b) < 0; }

TTH::TTH(TimeGrid grid, std::vector<std::string> aux_schema, std::shared_ptr<const Vocabulary> vocabulary,
         std::shared_ptr<const TermDocFrequency> forward, std::string field)
    : grid_(std::move(grid)),
      aux_schema_(std::move(aux_schema)),
      vocabulary_(std::move(vocabulary)),
      forward_(std::move(forward)),
      field_(std::move(field)) {
    if (!vocabulary_) {
        fail(ErrorKind::dependency, "a TTH needs a vocabulary");
    }
    std::set<std::string> names;
    for (const auto& name : aux_schema_) {
        if (name.empty() || !names.insert(name).second) {
            fail(ErrorKind::schema, "aux schema names must be distinct and non-empty");
        }
    }
}

TTH TTH::from_rows(TimeGrid grid, std::vector<std::string> aux_schema, std::shared_ptr<const Vocabulary> vocabulary,
                   std::vector<TTHRow> rows, std::shared_ptr<const TermDocFrequency> forward, std::string field) {
    TTH out(std::move(grid), std::move(aux_schema), std::move(vocabulary), std::move(forward), std::move(field));
    for (const auto& r : rows) {
        if (r.aux.size() != out.aux_schema_.size()) {
            fail(ErrorKind::schema, "row aux arity " + std::to_string(r.aux.size()) + " does not match schema arity " +
                                        std::to_string(out.aux_schema_.size()));
        }
        if (r.term >= out.vocabulary_->size()) {
            fail(ErrorKind::lookup, "row term id " + std::to_string(r.term) + " is not in the vocabulary");
        }
        if (r.docs.empty() || r.count < static_cast<Count>(r.docs.size())) {
            fail(ErrorKind::contract, "row " + describe_key(out, r.key()) + " violates count >= |docs| >= 1");
        }
        for (std::size_t i = 1; i < r.docs.size(); ++i) {
            if (r.docs[i - 1] >= r.docs[i]) {
                fail(ErrorKind::contract, "row " + describe_key(out, r.key()) + " has an unsorted document list");
            }
        }
        if (auto n = out.grid_.interval_count(); n && (r.interval < 0 || r.interval >= *n)) {
            fail(ErrorKind::range, "row " + describe_key(out, r.key()) + " lies outside the grid");
        }
    }
    std::sort(rows.begin(), rows.end(), key_less);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (compare_keys(rows[i - 1], rows[i]) == 0) {
            fail(ErrorKind::conflict, "duplicate row key " + describe_key(out, rows[i].key()));
        }
    }
    out.rows_ = std::move(rows);
    return out;
}

TTH TTH::with_rows(std::vector<TTHRow> rows) const {
    TTH out = *this;
    out.rows_ = std::move(rows);
    return out;
}

TTH TTH::with_grid(TimeGrid grid, std::vector<TTHRow> rows) const {
    TTH out = *this;
    out.grid_ = std::move(grid);
    out.rows_ = std::move(rows);
    return out;
}

Count TTH::total_count() const {
    Count total = 0;
    for (const auto& r : rows_) {
        total += r.count;
    }
    return total;
}

const TTHRow* TTH::find(const RowKey& key) const {
    TTHRow probe{key.term, key.interval, 0, {}, key.aux};
    auto it = std::lower_bound(rows_.begin(), rows_.end(), probe, key_less);
    if (it == rows_.end() || compare_keys(*it, probe) != 0) {
        return nullptr;
    }
    return &*it;
}

std::size_t TTH::aux_position(const std::string& name) const {
    auto it = std::find(aux_schema_.begin(), aux_schema_.end(), name);
    if (it == aux_schema_.end()) {
        fail(ErrorKind::schema, "'" + name + "' is not an auxiliary attribute of this TTH");
    }
    return static_cast<std::size_t>(it - aux_schema_.begin());
}

bool TTH::operator==(const TTH& other) const {
    return grid_ == other.grid_ && aux_schema_ == other.aux_schema_ && rows_ == other.rows_;
}

bool passes(const BuildPredicate& filter, const CorpusIndex& index, const FieldIndex& field,
            const DocumentMeta& doc) {
    if (filter.start && doc.date < *filter.start) {
        return false;
    }
    if (filter.end && !(doc.date < *filter.end)) {
        return false;
    }
    for (const auto& [category, value] : filter.aux_equals) {
        if (doc.aux[index.category_position(category)] != value) {
            return false;
        }
    }
    for (const auto& threshold : filter.term_thresholds) {
        auto term = field.vocabulary->find(threshold.term);
        Count have = term ? field.forward->frequency(*term, doc.id) : 0;
        if (have < threshold.min_count) {
            return false;
        }
    }
    return true;
}

namespace {

void check_build_grid(const CorpusIndex& index, const TimeGrid& grid) {
    const TimeGrid base = index.config.base_grid();
    if (grid.is_uniform()) {
        if (grid.width() % base.width() != 0) {
            fail(ErrorKind::alignment, "build width " + std::to_string(grid.width()) +
                                           "d is not a multiple of the corpus width " +
                                           std::to_string(base.width()) + "d");
        }
        if (!base.is_boundary(grid.origin())) {
            fail(ErrorKind::alignment, "build grid origin " + format_date(grid.origin()) +
                                           " is not on the corpus grid " + base.describe());
        }
        return;
    }
    for (Date b : grid.boundaries()) {
        if (!base.is_boundary(b)) {
            fail(ErrorKind::alignment, "grid boundary " + format_date(b) + " is not on the corpus grid " +
                                           base.describe());
        }
    }
}

}  // namespace

TTH build_tth(const CorpusIndex& index, const std::string& field_name, const TimeGrid& grid,
              const BuildPredicate& filter, const std::vector<std::string>& aux_schema) {
    const FieldIndex& field = index.field(field_name);
    check_build_grid(index, grid);
    std::vector<std::size_t> aux_positions;
    for (const auto& name : aux_schema) {
        aux_positions.push_back(index.category_position(name));
    }
    for (const auto& [category, value] : filter.aux_equals) {
        (void)index.category_position(category);
    }
    if (filter.start && filter.end && *filter.end < *filter.start) {
        fail(ErrorKind::range, "build date range ends before it starts");
    }

    struct Cell {
        TermId term;
        Interval interval;
        std::uint32_t aux_slot;
        DocId doc;
        Count count;
    };
    // Aux tuples are interned so that cells sort on a small integer.
    std::vector<AuxValues> aux_tuples;
    std::map<AuxValues, std::uint32_t> aux_slots;
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < index.documents.size(); ++i) {
        const DocumentMeta& doc = index.documents[i];
        if (!passes(filter, index, field, doc)) {
            continue;
        }
        auto interval = grid.interval_of(doc.date);
        if (!interval) {
            continue;
        }
        AuxValues aux;
        aux.reserve(aux_positions.size());
        for (auto p : aux_positions) {
            aux.push_back(doc.aux[p]);
        }
        auto [it, inserted] = aux_slots.try_emplace(aux, static_cast<std::uint32_t>(aux_tuples.size()));
        if (inserted) {
            aux_tuples.push_back(aux);
        }
        for (const auto& tc : field.histograms[i].rows) {
            cells.push_back(Cell{tc.term, *interval, it->second, doc.id, tc.count});
        }
    }
    std::sort(cells.begin(), cells.end(), [&](const Cell& a, const Cell& b) {
        if (a.term != b.term) return a.term < b.term;
        if (a.interval != b.interval) return a.interval < b.interval;
        if (a.aux_slot != b.aux_slot) return aux_tuples[a.aux_slot] < aux_tuples[b.aux_slot];
        return a.doc < b.doc;
    });
    std::vector<TTHRow> rows;
    for (std::size_t i = 0; i < cells.size();) {
        std::size_t j = i;
        TTHRow row{cells[i].term, cells[i].interval, 0, {}, aux_tuples[cells[i].aux_slot]};
        while (j < cells.size() && cells[j].term == cells[i].term && cells[j].interval == cells[i].interval &&
               cells[j].aux_slot == cells[i].aux_slot) {
            row.count += cells[j].count;
            row.docs.push_back(cells[j].doc);
            ++j;
        }
        rows.push_back(std::move(row));
        i = j;
    }
    TTH out(grid, aux_schema, field.vocabulary, field.forward, field_name);
    return out.with_rows(std::move(rows));
}

std::vector<TTHRow> dense_view(const TTH& tth, const std::vector<std::string>& terms, Interval first, Interval last) {
    std::vector<TermId> ids;
    for (const auto& t : terms) {
        ids.push_back(tth.vocabulary()->lookup(t));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::set<AuxValues> combos;
    for (const auto& r : tth.rows()) {
        combos.insert(r.aux);
    }
    if (combos.empty() && tth.aux_schema().empty()) {
        combos.insert(AuxValues{});
    }
    std::vector<TTHRow> out;
    for (TermId term : ids) {
        for (Interval i = first; i <= last; ++i) {
            for (const auto& aux : combos) {
                if (const TTHRow* row = tth.find(RowKey{term, i, aux})) {
                    out.push_back(*row);
                } else {
                    out.push_back(TTHRow{term, i, 0, {}, aux});
                }
            }
        }
    }
    return out;
}

std::vector<TTHRow> get_records(const TTH& tth, std::span<const RowKey> keys) {
    std::vector<RowKey> sorted(keys.begin(), keys.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<TTHRow> out;
    std::string missing;
    for (const auto& key : sorted) {
        if (const TTHRow* row = tth.find(key)) {
            out.push_back(*row);
        } else {
            missing += (missing.empty() ? "" : ", ") + describe_key(tth, key);
        }
    }
    if (!missing.empty()) {
        fail(ErrorKind::absent_row, "no stored rows for keys " + missing);
    }
    return out;
}

std::string describe_key(const TTH& tth, const RowKey& key) {
    std::string term = key.term < tth.vocabulary()->size() ? tth.vocabulary()->term_of(key.term)
                                                           : "#" + std::to_string(key.term);
    std::string out = "(" + term + ", " + std::to_string(key.interval);
    if (!key.aux.empty()) {
        out += ", [";
        for (std::size_t i = 0; i < key.aux.size(); ++i) {
            out += (i ? "," : "") + key.aux[i];
        }
        out += "]";
    }
    return out + ")";
}

}  // namespace tth
