#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pavekit/ingest/yolo.hpp"  // detail::parse_double

namespace pavekit::ingest {

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

inline std::string lower_trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  std::string out(s.substr(a, b - a));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

// CSV of per-image condition indices. Header must declare an image-id column
// (image/image_id/id/filename) and a pci column (pci/pci_score/score).
inline std::vector<RawRecord> parse_pci_csv(std::string_view csv_document) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < csv_document.size()) {
    std::size_t end = csv_document.find('\n', start);
    if (end == std::string_view::npos) end = csv_document.size();
    lines.push_back(csv_document.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) raise(Errc::MissingColumn, "empty CSV document");

  const auto header = detail::split_csv_line(lines[0]);
  int id_col = -1, pci_col = -1;
  static const std::set<std::string> id_names{"image", "image_id", "id", "filename", "image_ref"};
  static const std::set<std::string> pci_names{"pci", "pci_score", "score"};
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = detail::lower_trim(header[i]);
    if (id_col < 0 && id_names.count(name)) id_col = static_cast<int>(i);
    if (pci_col < 0 && pci_names.count(name)) pci_col = static_cast<int>(i);
  }
  if (id_col < 0) raise(Errc::MissingColumn, "no image-id column in header");
  if (pci_col < 0) raise(Errc::MissingColumn, "no pci column in header");

  std::vector<RawRecord> records;
  std::set<std::string> seen;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty() || lines[row] == "\r") continue;
    const auto fields = detail::split_csv_line(lines[row]);
    if (static_cast<int>(fields.size()) <= std::max(id_col, pci_col))
      raise(Errc::MalformedLine, "row " + std::to_string(row + 1) + ": too few columns");
    const std::string& image_id = fields[id_col];
    if (!seen.insert(image_id).second)
      raise(Errc::DuplicateImageId, "image id '" + image_id + "' appears more than once");
    double value = 0;
    if (!detail::parse_double(detail::lower_trim(fields[pci_col]), value))
      raise(Errc::MalformedLine, "row " + std::to_string(row + 1) + ": non-numeric pci");
    if (!(value >= 0.0 && value <= 100.0))
      raise(Errc::PciOutOfRange,
            "row " + std::to_string(row + 1) + ": pci " + std::to_string(value) + " outside [0,100]");
    records.push_back({image_id, PciRow{PciScore{value}}, ""});
  }
  return records;
}

}  // namespace pavekit::ingest
