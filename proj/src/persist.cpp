#include "tth/persist.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tth/error.hpp"

namespace tth {

namespace fs = std::filesystem;

namespace {

constexpr int kFormat = 1;

std::string vocab_file(std::size_t i) { return "field" + std::to_string(i) + ".vocab.json"; }
std::string forward_file(std::size_t i) { return "field" + std::to_string(i) + ".forward.tsv"; }

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + p.string());
    return out;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json parse_json(const std::string& text, const fs::path& p) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, p.string() + ": " + e.what());
    }
}

void write_all(const CorpusIndex& index, const fs::path& dir) {
    {
        auto out = open_out(dir / "config.json");
        out << to_json(index.config) << '\n';
    }
    {
        auto out = open_out(dir / "documents.jsonl");
        for (const auto& d : index.documents) {
            nlohmann::ordered_json j;
            j["id"] = d.id;
            j["date"] = format_date(d.date);
            j["aux"] = d.aux;
            out << j.dump() << '\n';
        }
    }
    nlohmann::ordered_json fields = nlohmann::ordered_json::array();
    const auto& names = index.config.term_index_fields;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const FieldIndex& f = index.field(names[i]);
        {
            auto out = open_out(dir / vocab_file(i));
            out << nlohmann::json(f.vocabulary->terms()).dump() << '\n';
        }
        {
            auto out = open_out(dir / forward_file(i));
            for (TermId t = 0; t < f.forward->term_count(); ++t) {
                for (const auto& p : f.forward->postings(t)) out << t << '\t' << p.doc << '\t' << p.count << '\n';
            }
        }
        fields.push_back({{"field", names[i]},
                          {"terms", f.vocabulary->size()},
                          {"entries", f.forward->entry_count()}});
    }
    nlohmann::ordered_json manifest;
    manifest["format"] = kFormat;
    manifest["corpus"] = index.config.corpus_name;
    manifest["documents"] = index.documents.size();
    manifest["fields"] = fields;
    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) fail(ErrorKind::io, "write to " + dir.string() + " failed");
}

}  // namespace

void save_index(const CorpusIndex& index, const fs::path& dir) {
    fs::path stage = dir;
    stage += ".partial";
    std::error_code ec;
    fs::remove_all(stage, ec);
    try {
        fs::create_directories(stage);
        write_all(index, stage);
        fs::create_directories(dir);
        for (const auto& entry : fs::directory_iterator(stage)) {
            fs::rename(entry.path(), dir / entry.path().filename());
        }
        fs::remove(stage);
    } catch (const fs::filesystem_error& e) {
        fs::remove_all(stage, ec);
        fail(ErrorKind::io, e.what());
    } catch (...) {
        fs::remove_all(stage, ec);
        throw;
    }
}

CorpusIndex load_index(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path)) fail(ErrorKind::io, dir.string() + " is not an index directory (no manifest.json)");
    auto manifest = parse_json(read_file(manifest_path), manifest_path);
    if (manifest.value("format", 0) != kFormat) fail(ErrorKind::parse, "unsupported index format in " + dir.string());

    CorpusIndex index;
    index.config = parse_mapping_config(read_file(dir / "config.json"), dir);
    const TimeGrid grid = index.config.base_grid();

    std::vector<std::pair<DocId, Interval>> doc_ts;
    {
        std::istringstream in(read_file(dir / "documents.jsonl"));
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            ++n;
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                DocumentMeta d;
                d.id = j.at("id").get<DocId>();
                d.date = parse_iso_date(j.at("date").get<std::string>());
                d.aux = j.at("aux").get<AuxValues>();
                if (d.aux.size() != index.config.category_fields.size()) {
                    fail(ErrorKind::parse, "documents.jsonl line " + std::to_string(n) + ": wrong number of aux values");
                }
                auto ts = grid.interval_of(d.date);
                if (!ts) fail(ErrorKind::parse, "documents.jsonl line " + std::to_string(n) + ": date before grid origin");
                doc_ts.emplace_back(d.id, *ts);
                index.documents.push_back(std::move(d));
            } catch (const nlohmann::json::exception& e) {
                fail(ErrorKind::parse, "documents.jsonl line " + std::to_string(n) + ": " + e.what());
            }
        }
    }

    const auto& names = index.config.term_index_fields;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const fs::path vp = dir / vocab_file(i);
        std::vector<std::string> terms;
        try {
            terms = parse_json(read_file(vp), vp).get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::parse, vp.string() + ": " + e.what());
        }
        std::vector<TermDocFrequency::Entry> entries;
        std::istringstream in(read_file(dir / forward_file(i)));
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            ++n;
            if (line.empty()) continue;
            std::istringstream row(line);
            long long t = -1, d = 0, c = 0;
            if (!(row >> t >> d >> c) || t < 0 || static_cast<std::size_t>(t) >= terms.size()) {
                fail(ErrorKind::parse, forward_file(i) + " line " + std::to_string(n) + ": bad entry");
            }
            entries.push_back({static_cast<TermId>(t), d, c});
        }
        FieldIndex f;
        f.field = names[i];
        f.vocabulary = std::make_shared<const Vocabulary>(terms);
        auto forward = std::make_shared<const TermDocFrequency>(
            TermDocFrequency::from_entries(std::move(entries), terms.size()));
        f.histograms = histograms_from_forward(*forward, doc_ts);
        f.forward = std::move(forward);
        index.fields.emplace(names[i], std::move(f));
    }
    return index;
}

}  // namespace tth
