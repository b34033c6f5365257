#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tth/algebra.hpp"

namespace tth::cli {

/// Runs one command line (args[0] is the program name). Returns the process exit code:
/// 0 success, 2 schema/argument, 3 alignment/range, 4 data/dependency/io.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Delimited table with a header row; fields are quoted as needed.
void write_relation(const Relation& rel, std::ostream& out, char separator = ',');

}  // namespace tth::cli
