#pragma once

#include "mipp/scale.hpp"
#include "mipp/sim.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace mipp {

/// 17 significant digits, enough to round-trip a double.
std::string csv_number(double v);

/// Appends one comma separated row terminated by a single '\n'.
void csv_row(std::string& out, std::initializer_list<std::string> fields);

/// `x,W` for every grid node.
std::string scale_csv(const ScaleTable& table);

/// `t,event,surplus` path dump.
std::string path_csv(const std::vector<PathEvent>& events);

/// Writes through a temporary file and renames, so a failed write leaves
/// no partial artifact behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mipp
