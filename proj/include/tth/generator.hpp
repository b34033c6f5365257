#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tth/config.hpp"
#include "tth/records.hpp"
#include "tth/time_grid.hpp"

namespace tth {

struct PlantedSignal {
    std::size_t term = 0;  // vocabulary rank, 0 = most frequent
    std::int64_t interval = 0;
    double boost = 10;
    std::optional<std::pair<std::string, std::string>> aux;  // only documents with this value
};

struct AuxDomain {
    std::string name;
    std::vector<std::string> values;
};

/// Every document whose `attribute` is `from` is re-emitted once per value in `to`, with
/// identical text and date.
struct CloneSpec {
    std::string attribute;
    std::string from;
    std::vector<std::string> to;
};

struct GenSpec {
    std::size_t num_docs = 1000;
    std::size_t vocab_size = 1000;
    double zipf_s = 1.0;
    std::int64_t intervals = 10;
    std::size_t doc_length = 50;        // tokens per document
    bool random_intervals = false;      // false: documents spread evenly over intervals
    std::vector<PlantedSignal> planted;
    std::vector<AuxDomain> aux;
    std::optional<CloneSpec> clone;
    std::uint64_t seed = 1;
    Date origin = Date::from_ymd(2017, 1, 1);
    std::int64_t width_days = 1;
    std::string field = "text";

    /// Argument error for inconsistent settings (e.g. planted term >= vocab_size).
    void validate() const;
};

/// Term string of a vocabulary rank, e.g. "t0042".
std::string generated_term(std::size_t rank, std::size_t vocab_size);

/// Mapping config that indexes generated records: field, aux categories and grid.
MappingConfig generated_config(const GenSpec& spec);

/// Emits records in id order. Tokens follow Zipf(s) over the vocabulary ranks; each
/// planted signal adds ceil(boost * p_max * doc_length) extra occurrences of its term to
/// every matching document of its interval, where p_max is the probability of the most
/// frequent term. Deterministic for a given spec.
void generate(const GenSpec& spec, const std::function<void(const SourceRecord&)>& sink);
std::vector<SourceRecord> generate_records(const GenSpec& spec);
/// One JSON object per line, the format ingest reads.
void write_jsonl(const GenSpec& spec, std::ostream& out);

/// Reads a GenSpec from JSON (keys mirror the struct fields).
GenSpec parse_gen_spec(const std::string& json_text);

/// Pearson chi-square statistic of `counts` against a uniform expectation.
double chi_square_uniform(const std::vector<std::int64_t>& counts);

/// Uniform double in [0, 1) from a 64-bit engine output, identical on all platforms.
double unit_interval(std::uint64_t bits);

}  // namespace tth
