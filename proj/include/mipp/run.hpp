#pragma once

#include "mipp/config.hpp"

#include <iosfwd>
#include <string>

namespace mipp {

inline constexpr int kExitOk = 0;
/// validate ran to completion but at least one check failed.
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitComputationError = 3;

/// Produces the CSV artifact for config.command. Throws on any error.
/// `all_passed` is cleared when a validate check fails.
std::string render(const RunConfig& config, bool& all_passed);

/// Renders and writes the artifact to config.out (or `out` when no path is
/// set). Nothing is written unless the computation succeeds.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mipp
