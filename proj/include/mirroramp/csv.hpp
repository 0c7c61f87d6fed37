#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mirroramp {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

// Full-precision scientific formatting used for every number in output files.
std::string format_number(double v);

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Writes '# key: value' lines, then the column header, then rows.
class CsvWriter {
 public:
  CsvWriter(Metadata metadata, std::vector<std::string> columns);
  void add_row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  Metadata metadata_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mirroramp
