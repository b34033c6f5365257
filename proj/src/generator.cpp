#include "tth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <json.hpp>

#include "tth/error.hpp"

namespace tth {

void GenSpec::validate() const {
    if (vocab_size == 0) fail(ErrorKind::argument, "vocab_size must be at least 1");
    if (!(zipf_s >= 0)) fail(ErrorKind::argument, "zipf exponent must be >= 0");
    if (intervals <= 0) fail(ErrorKind::argument, "intervals must be at least 1");
    if (width_days <= 0) fail(ErrorKind::argument, "width_days must be at least 1");
    if (field.empty()) fail(ErrorKind::argument, "field name must not be empty");
    for (const auto& p : planted) {
        if (p.term >= vocab_size) {
            fail(ErrorKind::argument, "planted term rank " + std::to_string(p.term) + " is outside the vocabulary of " +
                                          std::to_string(vocab_size));
        }
        if (p.interval < 0 || p.interval >= intervals) {
            fail(ErrorKind::argument, "planted interval " + std::to_string(p.interval) + " is outside 0.." +
                                          std::to_string(intervals - 1));
        }
        if (!(p.boost >= 0)) fail(ErrorKind::argument, "planted boost must be >= 0");
        if (p.aux) {
            auto it = std::find_if(aux.begin(), aux.end(), [&](const AuxDomain& d) { return d.name == p.aux->first; });
            if (it == aux.end()) fail(ErrorKind::argument, "planted signal names unknown aux '" + p.aux->first + "'");
        }
    }
    for (const auto& d : aux) {
        if (d.name.empty() || d.values.empty()) fail(ErrorKind::argument, "aux domains need a name and values");
        if (d.name == field || d.name == "id" || d.name == "date") {
            fail(ErrorKind::argument, "aux name '" + d.name + "' collides with a record field");
        }
    }
    if (clone) {
        auto it = std::find_if(aux.begin(), aux.end(), [&](const AuxDomain& d) { return d.name == clone->attribute; });
        if (it == aux.end()) fail(ErrorKind::argument, "clone attribute '" + clone->attribute + "' is not an aux domain");
    }
}

std::string generated_term(std::size_t rank, std::size_t vocab_size) {
    std::size_t digits = std::max<std::size_t>(4, std::to_string(vocab_size > 0 ? vocab_size - 1 : 0).size());
    std::string n = std::to_string(rank);
    return "t" + std::string(digits - std::min(digits, n.size()), '0') + n;
}

MappingConfig generated_config(const GenSpec& spec) {
    MappingConfig c;
    c.corpus_name = "generated";
    c.term_index_fields = {spec.field};
    for (const auto& d : spec.aux) c.category_fields.push_back(d.name);
    c.grid_origin = spec.origin;
    c.grid_width_days = spec.width_days;
    return c;
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

class Sampler {
public:
    Sampler(std::size_t n, double s) : cdf_(n) {
        double acc = 0;
        for (std::size_t r = 0; r < n; ++r) {
            acc += 1.0 / std::pow(static_cast<double>(r + 1), s);
            cdf_[r] = acc;
        }
        for (auto& c : cdf_) c /= acc;
        cdf_.back() = 1.0;
        p_max_ = cdf_.front();
    }

    std::size_t draw(double u) const {
        return static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    }
    double p_max() const { return p_max_; }

private:
    std::vector<double> cdf_;
    double p_max_ = 1;
};

}  // namespace

void generate(const GenSpec& spec, const std::function<void(const SourceRecord&)>& sink) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&] { return unit_interval(rng()); };
    auto pick = [&](std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n))); };
    Sampler zipf(spec.vocab_size, spec.zipf_s);
    std::vector<std::string> terms(spec.vocab_size);
    for (std::size_t r = 0; r < spec.vocab_size; ++r) terms[r] = generated_term(r, spec.vocab_size);

    std::int64_t next_id = 1;
    SourceRecord rec;
    for (std::size_t i = 0; i < spec.num_docs; ++i) {
        const std::int64_t interval =
            spec.random_intervals
                ? static_cast<std::int64_t>(pick(static_cast<std::size_t>(spec.intervals)))
                : static_cast<std::int64_t>(i * static_cast<std::size_t>(spec.intervals) / spec.num_docs);
        const Date date = spec.origin + interval * spec.width_days +
                          static_cast<std::int64_t>(pick(static_cast<std::size_t>(spec.width_days)));
        std::map<std::string, std::string> aux;
        for (const auto& d : spec.aux) aux[d.name] = d.values[pick(d.values.size())];

        std::string text;
        auto add = [&](const std::string& term) {
            if (!text.empty()) text += ' ';
            text += term;
        };
        for (std::size_t t = 0; t < spec.doc_length; ++t) add(terms[zipf.draw(uniform())]);
        for (const auto& p : spec.planted) {
            if (p.interval != interval) continue;
            if (p.aux && aux[p.aux->first] != p.aux->second) continue;
            auto extra = static_cast<std::size_t>(
                std::ceil(p.boost * zipf.p_max() * static_cast<double>(spec.doc_length)));
            for (std::size_t e = 0; e < extra; ++e) add(terms[p.term]);
        }

        auto emit = [&](const std::map<std::string, std::string>& values) {
            rec.line = static_cast<std::size_t>(next_id);
            rec.fields = values;
            rec.fields["id"] = std::to_string(next_id++);
            rec.fields["date"] = format_date(date);
            rec.fields[spec.field] = text;
            sink(rec);
        };
        emit(aux);
        if (spec.clone && aux[spec.clone->attribute] == spec.clone->from) {
            for (const auto& v : spec.clone->to) {
                auto copy = aux;
                copy[spec.clone->attribute] = v;
                emit(copy);
            }
        }
    }
}

std::vector<SourceRecord> generate_records(const GenSpec& spec) {
    std::vector<SourceRecord> out;
    generate(spec, [&](const SourceRecord& r) { out.push_back(r); });
    return out;
}

void write_jsonl(const GenSpec& spec, std::ostream& out) {
    generate(spec, [&](const SourceRecord& r) {
        nlohmann::ordered_json j;
        j["id"] = std::stoll(r.fields.at("id"));
        j["date"] = r.fields.at("date");
        for (const auto& d : spec.aux) j[d.name] = r.fields.at(d.name);
        j[spec.field] = r.fields.at(spec.field);
        out << j.dump() << '\n';
    });
}

GenSpec parse_gen_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("generator spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::schema, "generator spec must be a JSON object");
    GenSpec s;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const auto& v = it.value();
            if (k == "num_docs") s.num_docs = v.get<std::size_t>();
            else if (k == "vocab_size") s.vocab_size = v.get<std::size_t>();
            else if (k == "zipf_s") s.zipf_s = v.get<double>();
            else if (k == "intervals") s.intervals = v.get<std::int64_t>();
            else if (k == "doc_length") s.doc_length = v.get<std::size_t>();
            else if (k == "random_intervals") s.random_intervals = v.get<bool>();
            else if (k == "seed") s.seed = v.get<std::uint64_t>();
            else if (k == "origin") s.origin = parse_iso_date(v.get<std::string>());
            else if (k == "width_days") s.width_days = v.get<std::int64_t>();
            else if (k == "field") s.field = v.get<std::string>();
            else if (k == "aux") {
                for (auto a = v.begin(); a != v.end(); ++a) {
                    s.aux.push_back({a.key(), a.value().get<std::vector<std::string>>()});
                }
            } else if (k == "planted") {
                for (const auto& p : v) {
                    PlantedSignal sig;
                    sig.term = p.at("term").get<std::size_t>();
                    sig.interval = p.at("interval").get<std::int64_t>();
                    sig.boost = p.value("boost", 10.0);
                    if (p.contains("aux")) {
                        sig.aux = std::pair{p.at("aux").at("name").get<std::string>(),
                                            p.at("aux").at("value").get<std::string>()};
                    }
                    s.planted.push_back(sig);
                }
            } else if (k == "clone") {
                s.clone = CloneSpec{v.at("attribute").get<std::string>(), v.at("from").get<std::string>(),
                                    v.at("to").get<std::vector<std::string>>()};
            } else {
                fail(ErrorKind::schema, "unknown generator spec key '" + k + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::schema, std::string("bad generator spec: ") + e.what());
    }
    s.validate();
    return s;
}

double chi_square_uniform(const std::vector<std::int64_t>& counts) {
    if (counts.empty()) return 0;
    double total = 0;
    for (auto c : counts) total += static_cast<double>(c);
    const double expected = total / static_cast<double>(counts.size());
    if (expected == 0) return 0;
    double chi = 0;
    for (auto c : counts) {
        double d = static_cast<double>(c) - expected;
        chi += d * d / expected;
    }
    return chi;
}

}  // namespace tth
