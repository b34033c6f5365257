#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tth {

/// One raw input record: field name -> textual value.
struct SourceRecord {
    std::size_t line = 0;  // 1-based source line, for error messages
    std::map<std::string, std::string> fields;
};

enum class RecordFormat { jsonl, csv };

/// Infers the record format from a file extension (.csv -> csv, otherwise jsonl).
RecordFormat format_for_path(std::string_view path);

/// One JSON object per non-blank line. Non-string scalars are kept in their JSON
/// spelling; nested values are rejected with a parse error naming the line.
std::vector<SourceRecord> read_jsonl_records(std::istream& in);

/// RFC 4180 CSV with a header row (quoted fields may contain separators, quotes and
/// newlines).
std::vector<SourceRecord> read_csv_records(std::istream& in, char separator = ',');

std::vector<SourceRecord> read_records(std::istream& in, RecordFormat format);

/// Splits one CSV line (no embedded newlines) into fields.
std::vector<std::string> split_csv_line(std::string_view line, char separator = ',');

/// Quotes a CSV field when it contains the separator, a quote or a line break.
std::string csv_escape(std::string_view field, char separator = ',');

}  // namespace tth
