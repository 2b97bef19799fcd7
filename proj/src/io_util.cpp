#include "relaxlab/io_util.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace relaxlab {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  // try increasing precision until the value round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lg", &back);
    if (back == v) return buf;
  }
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& body) {
  // stage under .partial/ so an interrupted run leaves nothing in the
  // directory the readers scan
  const auto dir = path.parent_path().empty() ? std::filesystem::path(".")
                                              : path.parent_path();
  const auto stage_dir = dir / ".partial";
  std::filesystem::create_directories(stage_dir);
  const auto tmp = stage_dir / path.filename();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

}  // namespace relaxlab
