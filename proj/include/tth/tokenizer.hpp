#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tth {

struct MappingConfig;

struct TokenizerOptions {
    bool lowercase = true;
    std::set<std::string> stopwords;
    /// Multi-word terms; each is matched as a word sequence whose separators in the
    /// text are whitespace only.
    std::vector<std::string> phrases;
};

TokenizerOptions tokenizer_options(const MappingConfig& config);

/// Deterministic term splitter.
///
/// Words are maximal runs of ASCII letters/digits (bytes >= 0x80 count as letters so
/// UTF-8 words stay intact). At each word the longest matching phrase is taken first;
/// stopwords are dropped afterwards.
class Tokenizer {
public:
    explicit Tokenizer(TokenizerOptions options = {});

    std::vector<std::string> operator()(std::string_view text) const;

private:
    TokenizerOptions options_;
    std::vector<std::vector<std::string>> phrase_words_;  // longest first
};

std::vector<std::string> tokenize(std::string_view text, const MappingConfig& config);

}  // namespace tth
