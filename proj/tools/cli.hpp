#pragma once

// Command-line surface. Every run prints JSON-lines result records plus a
// final summary record embedding the fully-resolved configuration; exit
// codes: 0 witness found / verification passed, 1 exhausted or failed,
// 2 invalid input.

#include <iosfwd>
#include <string>
#include <vector>

namespace ramsey::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace ramsey::cli
