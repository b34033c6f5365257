#pragma once

#include <filesystem>

#include "tth/corpus.hpp"

namespace tth {

// Index directory layout:
//   manifest.json       format version, corpus name, document count, per-field summary
//   config.json         the mapping config (inline stopwords/phrases)
//   documents.jsonl     one {"id", "date", "aux": [...]} object per document, ascending id
//   field<i>.vocab.json term strings indexed by term id, for term_index field i
//   field<i>.forward.tsv "<term id>\t<doc id>\t<count>" lines, ascending (term, doc)

/// Writes `index` to `dir` (created if missing). Files are staged next to `dir` and moved
/// in only when everything was written; on failure nothing is left behind.
void save_index(const CorpusIndex& index, const std::filesystem::path& dir);

/// Reads a directory written by save_index. Missing files are io errors, malformed
/// content parse errors.
CorpusIndex load_index(const std::filesystem::path& dir);

}  // namespace tth
