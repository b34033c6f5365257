#include "tth/records.hpp"

#include <istream>

#include <json.hpp>

#include "tth/error.hpp"

namespace tth {

RecordFormat format_for_path(std::string_view path) {
    return path.ends_with(".csv") ? RecordFormat::csv : RecordFormat::jsonl;
}

std::vector<SourceRecord> read_jsonl_records(std::istream& in) {
    std::vector<SourceRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": malformed JSON record (" +
                                       e.what() + ")");
        }
        if (!j.is_object()) {
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": record is not a JSON object");
        }
        SourceRecord rec;
        rec.line = line_no;
        for (const auto& [key, value] : j.items()) {
            if (value.is_string()) {
                rec.fields[key] = value.get<std::string>();
            } else if (value.is_null()) {
                continue;
            } else if (value.is_primitive()) {
                rec.fields[key] = value.dump();
            } else {
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": field '" + key +
                                           "' must be a scalar");
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

// Reads one logical CSV row (which may span physical lines). Returns false at EOF.
bool read_csv_row(std::istream& in, char sep, std::vector<std::string>& out, std::size_t& line_no) {
    out.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    bool was_quoted = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') {
                    ++line_no;
                }
                field += ch;
            }
            continue;
        }
        if (ch == '"' && field.empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
        } else if (ch == sep) {
            out.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (ch == '\n') {
            ++line_no;
            out.push_back(std::move(field));
            return true;
        } else if (ch == '\r') {
            // tolerated before '\n'
        } else {
            field += ch;
        }
    }
    if (in_quotes) {
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": unterminated quoted CSV field");
    }
    if (!any) {
        return false;
    }
    out.push_back(std::move(field));
    return true;
}

}  // namespace

std::vector<SourceRecord> read_csv_records(std::istream& in, char separator) {
    std::vector<SourceRecord> records;
    std::vector<std::string> header;
    std::vector<std::string> row;
    std::size_t line_no = 0;
    std::size_t start_line = 1;
    if (!read_csv_row(in, separator, header, line_no)) {
        return records;
    }
    start_line = line_no + 1;
    while (read_csv_row(in, separator, row, line_no)) {
        if (row.size() == 1 && row[0].empty()) {
            start_line = line_no + 1;
            continue;
        }
        if (row.size() != header.size()) {
            fail(ErrorKind::parse, "line " + std::to_string(start_line) + ": expected " +
                                       std::to_string(header.size()) + " CSV fields, found " +
                                       std::to_string(row.size()));
        }
        SourceRecord rec;
        rec.line = start_line;
        for (std::size_t i = 0; i < header.size(); ++i) {
            rec.fields[header[i]] = std::move(row[i]);
        }
        records.push_back(std::move(rec));
        start_line = line_no + 1;
    }
    return records;
}

std::vector<SourceRecord> read_records(std::istream& in, RecordFormat format) {
    return format == RecordFormat::csv ? read_csv_records(in) : read_jsonl_records(in);
}

std::vector<std::string> split_csv_line(std::string_view line, char separator) {
    std::vector<std::string> out;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"' && field.empty()) {
            in_quotes = true;
        } else if (ch == separator) {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::string csv_escape(std::string_view field, char separator) {
    if (field.find_first_of(std::string{separator, '"', '\n', '\r'}) == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace tth
