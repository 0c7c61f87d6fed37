#include "mirroramp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mirroramp/errors.hpp"

namespace mirroramp {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(Metadata metadata, std::vector<std::string> columns)
    : metadata_(std::move(metadata)), columns_(std::move(columns)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
  require(cells.size() == columns_.size(), "row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
  std::ostringstream o;
  for (const auto& [k, v] : metadata_) {
    // Multi-line values become one comment line each.
    std::istringstream lines(v);
    std::string line;
    bool first = true;
    while (std::getline(lines, line)) {
      o << "# " << (first ? k + ": " : std::string(k.size() + 2, ' ')) << line << "\n";
      first = false;
    }
    if (first) o << "# " << k << ":\n";
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) o << (i ? "," : "") << columns_[i];
  o << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
    o << "\n";
  }
  return o.str();
}

void CsvWriter::write(const std::filesystem::path& path) const { write_text_file(path, str()); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::InvalidArgument, "write failed for " + path.string());
}

}  // namespace mirroramp
