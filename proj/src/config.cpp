#include "tth/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tth/error.hpp"

namespace tth {

namespace {

using nlohmann::json;

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::io, "cannot open word list " + path.string());
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        words.push_back(line.substr(first));
    }
    return words;
}

std::vector<std::string> string_list(const json& j, const char* key) {
    if (!j.contains(key)) {
        return {};
    }
    const auto& v = j.at(key);
    if (v.is_string()) {
        return {v.get<std::string>()};
    }
    if (!v.is_array()) {
        fail(ErrorKind::schema, std::string("config key '") + key + "' must be a list of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) {
            fail(ErrorKind::schema, std::string("config key '") + key + "' must be a list of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    });
    return s;
}

}  // namespace

bool MappingConfig::is_term_index_field(const std::string& name) const {
    return std::find(term_index_fields.begin(), term_index_fields.end(), name) != term_index_fields.end();
}

bool MappingConfig::is_category(const std::string& name) const {
    return std::find(category_fields.begin(), category_fields.end(), name) != category_fields.end();
}

void MappingConfig::validate() const {
    std::vector<std::string> names{id_field, temporal_field};
    names.insert(names.end(), term_index_fields.begin(), term_index_fields.end());
    names.insert(names.end(), category_fields.begin(), category_fields.end());
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) {
            fail(ErrorKind::schema, "mapping field names must be non-empty");
        }
        if (!seen.insert(name).second) {
            fail(ErrorKind::schema, "mapping field '" + name + "' is declared more than once");
        }
    }
    if (term_index_fields.empty()) {
        fail(ErrorKind::schema, "mapping declares no term_index field");
    }
    if (grid_width_days <= 0) {
        fail(ErrorKind::argument, "grid_width_days must be a positive whole number of days");
    }
}

MappingConfig parse_mapping_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorKind::schema, std::string("mapping config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        fail(ErrorKind::schema, "mapping config must be a JSON object");
    }
    auto get_string = [&](const char* key, std::string fallback) {
        if (!j.contains(key)) {
            return fallback;
        }
        if (!j.at(key).is_string()) {
            fail(ErrorKind::schema, std::string("config key '") + key + "' must be a string");
        }
        return j.at(key).get<std::string>();
    };
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() ? base_dir / path : path;
    };

    MappingConfig config;
    config.corpus_name = get_string("corpus", "");
    config.id_field = get_string("id_field", config.id_field);
    config.temporal_field = get_string("temporal_field", config.temporal_field);
    config.temporal_format = get_string("temporal_format", config.temporal_format);
    config.term_index_fields = string_list(j, "term_index");
    config.category_fields = string_list(j, "categories");
    if (j.contains("lowercase")) {
        if (!j.at("lowercase").is_boolean()) {
            fail(ErrorKind::schema, "config key 'lowercase' must be a boolean");
        }
        config.lowercase = j.at("lowercase").get<bool>();
    }
    std::vector<std::string> stopwords = string_list(j, "stopwords");
    if (j.contains("stopwords_path")) {
        auto extra = read_word_list(resolve(get_string("stopwords_path", "")));
        stopwords.insert(stopwords.end(), extra.begin(), extra.end());
    }
    config.phrases = string_list(j, "phrases");
    if (j.contains("phrases_path")) {
        auto extra = read_word_list(resolve(get_string("phrases_path", "")));
        config.phrases.insert(config.phrases.end(), extra.begin(), extra.end());
    }
    for (auto& w : stopwords) {
        config.stopwords.insert(config.lowercase ? lowered(w) : w);
    }
    if (config.lowercase) {
        for (auto& p : config.phrases) {
            p = lowered(p);
        }
    }
    config.grid_origin = parse_iso_date(get_string("grid_origin", "1970-01-01"));
    if (j.contains("grid_width_days")) {
        const auto& w = j.at("grid_width_days");
        if (!w.is_number_integer()) {
            fail(ErrorKind::argument, "grid_width_days must be a whole number of days");
        }
        config.grid_width_days = w.get<std::int64_t>();
    }
    config.validate();
    return config;
}

MappingConfig load_mapping_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::io, "cannot open mapping config " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_mapping_config(text.str(), path.parent_path());
}

std::string to_json(const MappingConfig& config) {
    json j;
    j["corpus"] = config.corpus_name;
    j["id_field"] = config.id_field;
    j["temporal_field"] = config.temporal_field;
    j["temporal_format"] = config.temporal_format;
    j["term_index"] = config.term_index_fields;
    j["categories"] = config.category_fields;
    j["stopwords"] = std::vector<std::string>(config.stopwords.begin(), config.stopwords.end());
    j["phrases"] = config.phrases;
    j["lowercase"] = config.lowercase;
    j["grid_origin"] = format_date(config.grid_origin);
    j["grid_width_days"] = config.grid_width_days;
    return j.dump(2) + "\n";
}

}  // namespace tth
