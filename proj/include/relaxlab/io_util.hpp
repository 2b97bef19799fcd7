#pragma once
// Small IO helpers shared by the scenario layer: deterministic number
// formatting, atomic file replacement, and a stable config hash.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace relaxlab {

// shortest round-trippable decimal form, locale independent
std::string fmt_double(double v);

// write to <path>.partial in the same directory, then rename over path
void atomic_write(const std::filesystem::path& path, const std::string& body);

uint64_t fnv1a64(const std::string& s);
std::string hex64(uint64_t v);

std::string csv_row(const std::vector<std::string>& cells);

}  // namespace relaxlab
