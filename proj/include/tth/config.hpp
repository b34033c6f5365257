#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "tth/date.hpp"
#include "tth/time_grid.hpp"

namespace tth {

/// Declares which record fields play which role when a corpus is indexed.
struct MappingConfig {
    std::string corpus_name;
    std::string id_field = "id";
    std::string temporal_field = "date";
    std::string temporal_format = "%Y-%m-%d";
    std::vector<std::string> term_index_fields;
    std::vector<std::string> category_fields;
    std::set<std::string> stopwords;
    std::vector<std::string> phrases;
    bool lowercase = true;
    Date grid_origin{};
    std::int64_t grid_width_days = 1;

    TimeGrid base_grid() const { return TimeGrid::uniform(grid_origin, grid_width_days); }

    bool is_term_index_field(const std::string& name) const;
    bool is_category(const std::string& name) const;

    /// Throws schema error on empty or duplicated field names, argument error on a
    /// non-positive grid width.
    void validate() const;
};

/// Reads a JSON mapping file. Keys: corpus, id_field, temporal_field, temporal_format,
/// term_index, categories, stopwords_path, phrases_path, stopwords, phrases, lowercase,
/// grid_origin, grid_width_days. Relative paths resolve against the file's directory.
MappingConfig load_mapping_config(const std::filesystem::path& path);

/// Parses the same schema from JSON text; relative paths resolve against `base_dir`.
MappingConfig parse_mapping_config(const std::string& json_text,
                                   const std::filesystem::path& base_dir = {});

/// Serializes with inline stopword/phrase lists (no paths).
std::string to_json(const MappingConfig& config);

}  // namespace tth
