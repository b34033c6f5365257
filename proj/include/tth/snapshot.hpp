#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>

#include "tth/tth.hpp"

namespace tth {

// Snapshot text format (UTF-8, '\n' line ends):
//
//   #tth-snapshot v1<TAB>field=<name><TAB>grid=<grid><TAB>aux=<a1>,<a2>...
//   <term><TAB><interval start YYYY-MM-DD><TAB><count><TAB><doc>,<doc>...[<TAB><aux value>]...
//
// <grid> is "uniform:<origin>:<width days>" or "explicit:<date>,<date>,...". Rows are
// written in key order. Backslash, tab, newline, carriage return and comma inside
// strings are escaped as \\ \t \n \r \c.

void save_snapshot(std::ostream& out, const TTH& tth);
std::string snapshot_string(const TTH& tth);
void save_snapshot_file(const std::filesystem::path& path, const TTH& tth);

/// Resolves terms through `vocabulary` (lookup error for unknown terms).
TTH load_snapshot(std::istream& in, std::shared_ptr<const Vocabulary> vocabulary,
                  std::shared_ptr<const TermDocFrequency> forward = {});
/// Builds a fresh vocabulary from the terms in the file, in order of appearance.
TTH load_snapshot(std::istream& in);

TTH load_snapshot_file(const std::filesystem::path& path, std::shared_ptr<const Vocabulary> vocabulary,
                       std::shared_ptr<const TermDocFrequency> forward = {});

}  // namespace tth
