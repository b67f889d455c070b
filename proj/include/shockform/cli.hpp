#pragma once

// Command-line front end. Subcommands: analyze, curve, shock, field,
// reference, verify; global flags --out, --config, --preset, --threads.

#include <ostream>
#include <string>
#include <vector>

namespace shockform {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int criteria_failed = 1;  // verify: at least one criterion failed
inline constexpr int validation = 2;
inline constexpr int numerical = 3;
inline constexpr int usage = 64;   // unknown subcommand or bad flags
inline constexpr int config = 65;  // ConfigInvalid
}  // namespace exit_code

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace shockform
