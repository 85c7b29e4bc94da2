#pragma once

#include <iosfwd>

namespace ttrace::cli {

/// Entry point of the ttrace tool: subcommands gen, attack, score, roc, wca.
/// Returns the process exit code; 0 iff every requested artifact was written.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ttrace::cli
