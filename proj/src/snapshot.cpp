#include "tth/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tth/error.hpp"

namespace tth {

namespace {

constexpr std::string_view kMagic = "#tth-snapshot v1";

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case ',': out += "\\c"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape(std::string_view s, std::size_t line) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i >= s.size()) {
            fail(ErrorKind::parse, "snapshot line " + std::to_string(line) + ": dangling escape");
        }
        switch (s[i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case 'c': out += ','; break;
            default: fail(ErrorKind::parse, "snapshot line " + std::to_string(line) + ": bad escape");
        }
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::int64_t parse_int(std::string_view s, std::size_t line, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        fail(ErrorKind::parse, "snapshot line " + std::to_string(line) + ": bad " + what + " '" + std::string(s) + "'");
    }
    return v;
}

std::string grid_spec(const TimeGrid& grid) {
    if (grid.is_uniform()) {
        return "uniform:" + format_date(grid.origin()) + ":" + std::to_string(grid.width());
    }
    std::string out = "explicit:";
    for (std::size_t i = 0; i < grid.boundaries().size(); ++i) {
        out += (i ? "," : "") + format_date(grid.boundaries()[i]);
    }
    return out;
}

TimeGrid parse_grid(std::string_view spec) {
    if (spec.starts_with("uniform:")) {
        auto parts = split(spec.substr(8), ':');
        if (parts.size() != 2) {
            fail(ErrorKind::parse, "snapshot header: bad grid '" + std::string(spec) + "'");
        }
        return TimeGrid::uniform(parse_iso_date(parts[0]), parse_int(parts[1], 1, "grid width"));
    }
    if (spec.starts_with("explicit:")) {
        std::vector<Date> bounds;
        for (auto d : split(spec.substr(9), ',')) {
            bounds.push_back(parse_iso_date(d));
        }
        return TimeGrid::from_boundaries(std::move(bounds));
    }
    fail(ErrorKind::parse, "snapshot header: bad grid '" + std::string(spec) + "'");
}

struct Header {
    std::string field;
    TimeGrid grid;
    std::vector<std::string> aux;
};

Header parse_header(const std::string& line) {
    auto parts = split(line, '\t');
    if (parts.empty() || parts[0] != kMagic) {
        fail(ErrorKind::parse, "not a TTH snapshot (missing '" + std::string(kMagic) + "' header)");
    }
    Header h;
    bool have_grid = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto kv = parts[i];
        auto eq = kv.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorKind::parse, "snapshot header: bad entry '" + std::string(kv) + "'");
        }
        auto key = kv.substr(0, eq);
        auto value = kv.substr(eq + 1);
        if (key == "field") {
            h.field = unescape(value, 1);
        } else if (key == "grid") {
            h.grid = parse_grid(value);
            have_grid = true;
        } else if (key == "aux") {
            if (!value.empty()) {
                for (auto a : split(value, ',')) {
                    h.aux.push_back(unescape(a, 1));
                }
            }
        } else {
            fail(ErrorKind::parse, "snapshot header: unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_grid) {
        fail(ErrorKind::parse, "snapshot header has no grid");
    }
    return h;
}

template <typename ResolveTerm>
std::vector<TTHRow> read_rows(std::istream& in, const Header& h, ResolveTerm&& resolve) {
    std::vector<TTHRow> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto parts = split(line, '\t');
        if (parts.size() != 4 + h.aux.size()) {
            fail(ErrorKind::parse, "snapshot line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(4 + h.aux.size()) + " columns");
        }
        TTHRow row;
        row.term = resolve(unescape(parts[0], line_no));
        Date start = parse_iso_date(parts[1]);
        auto interval = h.grid.interval_starting_at(start);
        if (!interval) {
            fail(ErrorKind::parse, "snapshot line " + std::to_string(line_no) + ": " + format_date(start) +
                                       " is not an interval start of " + h.grid.describe());
        }
        row.interval = *interval;
        row.count = parse_int(parts[2], line_no, "count");
        for (auto d : split(parts[3], ',')) {
            row.docs.push_back(parse_int(d, line_no, "document id"));
        }
        for (std::size_t a = 0; a < h.aux.size(); ++a) {
            row.aux.push_back(unescape(parts[4 + a], line_no));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void save_snapshot(std::ostream& out, const TTH& tth) {
    out << kMagic << "\tfield=" << escape(tth.field()) << "\tgrid=" << grid_spec(tth.grid()) << "\taux=";
    for (std::size_t i = 0; i < tth.aux_schema().size(); ++i) {
        out << (i ? "," : "") << escape(tth.aux_schema()[i]);
    }
    out << '\n';
    for (const auto& r : tth.rows()) {
        out << escape(tth.term_string(r.term)) << '\t' << format_date(tth.grid().interval_start(r.interval)) << '\t'
            << r.count << '\t';
        for (std::size_t i = 0; i < r.docs.size(); ++i) {
            out << (i ? "," : "") << r.docs[i];
        }
        for (const auto& a : r.aux) {
            out << '\t' << escape(a);
        }
        out << '\n';
    }
}

std::string snapshot_string(const TTH& tth) {
    std::ostringstream out;
    save_snapshot(out, tth);
    return out.str();
}

void save_snapshot_file(const std::filesystem::path& path, const TTH& tth) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorKind::io, "cannot write snapshot " + path.string());
    }
    save_snapshot(out, tth);
    if (!out) {
        fail(ErrorKind::io, "failed writing snapshot " + path.string());
    }
}

TTH load_snapshot(std::istream& in, std::shared_ptr<const Vocabulary> vocabulary,
                  std::shared_ptr<const TermDocFrequency> forward) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorKind::parse, "empty snapshot");
    }
    Header h = parse_header(line);
    auto rows = read_rows(in, h, [&](const std::string& term) { return vocabulary->lookup(term); });
    return TTH::from_rows(h.grid, h.aux, std::move(vocabulary), std::move(rows), std::move(forward), h.field);
}

TTH load_snapshot(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorKind::parse, "empty snapshot");
    }
    Header h = parse_header(line);
    auto vocabulary = std::make_shared<Vocabulary>();
    auto rows = read_rows(in, h, [&](const std::string& term) { return vocabulary->intern(term); });
    return TTH::from_rows(h.grid, h.aux, std::move(vocabulary), std::move(rows), {}, h.field);
}

TTH load_snapshot_file(const std::filesystem::path& path, std::shared_ptr<const Vocabulary> vocabulary,
                       std::shared_ptr<const TermDocFrequency> forward) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::io, "cannot open snapshot " + path.string());
    }
    return load_snapshot(in, std::move(vocabulary), std::move(forward));
}

}  // namespace tth
