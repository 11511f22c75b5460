#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hvi {

/// Subcommands solve, study, diagnose and plot. Returns 0 on success, 1 when
/// a solve or output step fails and 2 on a usage error.
int cli_main(int argc, char** argv);
/// Same, with explicit streams; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hvi
