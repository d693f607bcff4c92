#include "mipp/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mipp {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void csv_row(std::string& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += '\n';
}

std::string scale_csv(const ScaleTable& table) {
  std::string out;
  out.reserve(static_cast<std::size_t>(table.values.size()) * 44 + 8);
  csv_row(out, {"x", "W"});
  for (Eigen::Index k = 0; k < table.values.size(); ++k) {
    csv_row(out, {csv_number(table.grid.x(k)), csv_number(table.values[k])});
  }
  return out;
}

std::string path_csv(const std::vector<PathEvent>& events) {
  std::string out;
  csv_row(out, {"t", "event", "surplus"});
  for (const auto& e : events) csv_row(out, {csv_number(e.t), to_string(e.kind), csv_number(e.surplus)});
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to " + path + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path);
  }
}

}  // namespace mipp
