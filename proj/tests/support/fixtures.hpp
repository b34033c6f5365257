#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tth/algebra.hpp"
#include "tth/corpus.hpp"
#include "tth/error.hpp"
#include "tth/tth.hpp"

namespace tth::testing {

/// Kind of the tth::Error thrown by `f`, or nullopt when it returns normally.
template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline const Date kOrigin = Date::from_ymd(2017, 1, 1);

/// One "text" field, no lowercasing, given categories, uniform grid at kOrigin.
MappingConfig plain_config(std::vector<std::string> categories = {}, std::int64_t width = 1);

SourceRecord record(DocId id, Date date, const std::string& text, const std::map<std::string, std::string>& aux = {});

CorpusIndex index_of(const MappingConfig& config, const std::vector<SourceRecord>& records);

/// Three documents: 1 @ interval 1 "A B C B", 2 @ 1 "D C A A", 3 @ 2 "A E D B".
CorpusIndex fig1_index();

/// The two input histograms of the merge figure and the expected result, on one shared
/// vocabulary {A, B, C} and a one-day grid.
TTH fig2_left();
TTH fig2_middle();
std::vector<TTHRow> fig2_merged_rows();

// ---------------------------------------------------------------------------
// Random corpora

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, n).
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::size_t>(hi - lo + 1)));
    }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct RawDoc {
    DocId id = 0;
    std::int64_t day = 0;  // days after kOrigin
    AuxValues aux;
    std::vector<std::string> tokens;
};

struct RandomCorpus {
    std::vector<std::string> categories;
    std::vector<RawDoc> docs;  // ascending id
    CorpusIndex index;
    std::int64_t days = 1;
};

struct CorpusShape {
    std::size_t max_docs = 50;
    std::size_t max_terms = 20;
    std::int64_t max_intervals = 10;
    std::size_t max_aux = 2;
};

RandomCorpus random_corpus(Rng& rng, const CorpusShape& shape = {});

// ---------------------------------------------------------------------------
// Brute-force recount from raw documents

using BruteKey = std::tuple<std::string, Interval, AuxValues>;
struct BruteCell {
    Count count = 0;
    std::set<DocId> docs;
    bool operator==(const BruteCell&) const = default;
};
using BruteRows = std::map<BruteKey, BruteCell>;

/// Counts every token of documents passing `keep`, binned by `width` days from kOrigin,
/// keyed by the aux positions in `aux_positions`.
template <class Keep>
BruteRows brute_build(const RandomCorpus& c, std::int64_t width, const std::vector<std::size_t>& aux_positions,
                      Keep&& keep) {
    BruteRows out;
    for (const auto& d : c.docs) {
        if (!keep(d)) continue;
        AuxValues aux;
        for (auto p : aux_positions) aux.push_back(d.aux[p]);
        const Interval ts = d.day >= 0 ? d.day / width : -((-d.day + width - 1) / width);
        for (const auto& t : d.tokens) {
            auto& cell = out[{t, ts, aux}];
            ++cell.count;
            cell.docs.insert(d.id);
        }
    }
    return out;
}

BruteRows brute_build(const RandomCorpus& c, std::int64_t width, const std::vector<std::size_t>& aux_positions);

BruteRows to_brute(const TTH& tth);

/// Per retained-axis value (term string or interval) count and documents.
std::map<std::string, BruteCell> brute_marginal(const BruteRows& rows, Axis retained);
std::map<std::string, BruteCell> to_brute(const Marginal1D& m, const TTH& context);

// ---------------------------------------------------------------------------
// Mann-Whitney enumeration oracle

/// P(U_x <= observed) under the null, by enumerating every split of the pooled sample.
double enumerate_u_less(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tth::testing
