#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace legend::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Ordered key=value pairs of a run configuration file.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Flat key=value text; '#' starts a comment, blank lines are skipped and
/// keys match long option names without the leading dashes.
ConfigEntries parse_config(std::string_view text);
ConfigEntries read_config_file(const std::filesystem::path& path);

/// Runs the `legend` command line. `args` excludes the program name.
/// Returns 0 on success, 2 for usage or input errors, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace legend::cli
