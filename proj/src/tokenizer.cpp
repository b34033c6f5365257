#include "tth/tokenizer.hpp"

#include <algorithm>

#include "tth/config.hpp"

namespace tth {

namespace {

bool is_word_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

struct Word {
    std::string text;
    std::size_t begin;
    std::size_t end;
};

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && !is_word_byte(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        std::size_t b = i;
        while (i < s.size() && is_word_byte(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        if (i > b) {
            out.emplace_back(s.substr(b, i - b));
        }
    }
    return out;
}

}  // namespace

TokenizerOptions tokenizer_options(const MappingConfig& config) {
    return TokenizerOptions{config.lowercase, config.stopwords, config.phrases};
}

Tokenizer::Tokenizer(TokenizerOptions options) : options_(std::move(options)) {
    for (const auto& phrase : options_.phrases) {
        std::string p = phrase;
        if (options_.lowercase) {
            std::transform(p.begin(), p.end(), p.begin(), [](unsigned char c) {
                return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
            });
        }
        auto words = split_words(p);
        if (!words.empty()) {
            phrase_words_.push_back(std::move(words));
        }
    }
    std::stable_sort(phrase_words_.begin(), phrase_words_.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
}

std::vector<std::string> Tokenizer::operator()(std::string_view raw) const {
    std::string text(raw);
    if (options_.lowercase) {
        std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
            return static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        });
    }
    std::vector<Word> words;
    for (std::size_t i = 0; i < text.size();) {
        while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        std::size_t b = i;
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i > b) {
            words.push_back(Word{text.substr(b, i - b), b, i});
        }
    }

    auto separated_by_space = [&](std::size_t from, std::size_t to) {
        for (std::size_t k = from; k < to; ++k) {
            if (!is_space(text[k])) {
                return false;
            }
        }
        return true;
    };

    std::vector<std::string> terms;
    for (std::size_t i = 0; i < words.size();) {
        bool matched = false;
        for (const auto& phrase : phrase_words_) {
            const std::size_t n = phrase.size();
            if (i + n > words.size()) {
                continue;
            }
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k) {
                ok = words[i + k].text == phrase[k];
                if (ok && k > 0) {
                    ok = separated_by_space(words[i + k - 1].end, words[i + k].begin);
                }
            }
            if (ok) {
                std::string term = phrase[0];
                for (std::size_t k = 1; k < n; ++k) {
                    term += ' ';
                    term += phrase[k];
                }
                terms.push_back(std::move(term));
                i += n;
                matched = true;
                break;
            }
        }
        if (!matched) {
            terms.push_back(words[i].text);
            ++i;
        }
    }
    if (!options_.stopwords.empty()) {
        std::erase_if(terms, [&](const std::string& t) { return options_.stopwords.contains(t); });
    }
    return terms;
}

std::vector<std::string> tokenize(std::string_view text, const MappingConfig& config) {
    return Tokenizer(tokenizer_options(config))(text);
}

}  // namespace tth
