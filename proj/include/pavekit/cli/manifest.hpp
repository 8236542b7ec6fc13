#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pavekit/genkit/plan.hpp"

namespace pavekit::cli {

enum class DatasetFormat { Yolo, Voc, Coco, ColorFolder, PciCsv };

inline std::optional<DatasetFormat> dataset_format_from_string(std::string_view s) {
  if (s == "yolo") return DatasetFormat::Yolo;
  if (s == "voc") return DatasetFormat::Voc;
  if (s == "coco") return DatasetFormat::Coco;
  if (s == "color_folder") return DatasetFormat::ColorFolder;
  if (s == "pci_csv") return DatasetFormat::PciCsv;
  return std::nullopt;
}

inline std::string_view to_string(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::Yolo: return "yolo";
    case DatasetFormat::Voc: return "voc";
    case DatasetFormat::Coco: return "coco";
    case DatasetFormat::ColorFolder: return "color_folder";
    case DatasetFormat::PciCsv: return "pci_csv";
  }
  return "?";
}

struct DatasetEntry {
  std::string name;
  DatasetFormat format = DatasetFormat::Yolo;
  std::filesystem::path root;
  std::vector<std::string> classes;  // YOLO class-index vocabulary
};

struct GenerationConfig {
  std::string provider = "mock";  // none | mock | remote
  std::string model = "default";
  int provider_concurrency = 4;  // bounded in-flight generation requests
  genkit::MixConfig mix;
  std::optional<ImageDims> target_dims;  // common Stage-2 target when set
};

struct Manifest {
  std::uint64_t seed = 0;
  bool lenient = false;
  std::filesystem::path out_dir = "out";
  std::vector<DatasetEntry> datasets;
  GenerationConfig generation;
  std::filesystem::path base_dir;  // manifest location; relative roots resolve against it
};

namespace detail {

struct TomlValue {
  enum class Kind { String, Number, Bool, StringArray } kind = Kind::String;
  std::string str;
  double num = 0;
  bool boolean = false;
  std::vector<std::string> array;
};

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline TomlValue parse_value(const std::string& raw, int line_no) {
  TomlValue v;
  if (raw.empty()) raise(Errc::ManifestError, "empty value at line " + std::to_string(line_no));
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      raise(Errc::ManifestError, "unterminated string at line " + std::to_string(line_no));
    v.kind = TomlValue::Kind::String;
    v.str = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']')
      raise(Errc::ManifestError, "unterminated array at line " + std::to_string(line_no));
    v.kind = TomlValue::Kind::StringArray;
    std::string body = raw.substr(1, raw.size() - 2);
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      if (comma == std::string::npos) comma = body.size();
      const std::string item = trim(body.substr(start, comma - start));
      if (!item.empty()) {
        if (item.front() != '"' || item.back() != '"')
          raise(Errc::ManifestError, "array items must be strings at line " + std::to_string(line_no));
        v.array.push_back(item.substr(1, item.size() - 2));
      }
      if (comma == body.size()) break;
      start = comma + 1;
    }
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = TomlValue::Kind::Bool;
    v.boolean = raw == "true";
    return v;
  }
  try {
    std::size_t used = 0;
    v.num = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    v.kind = TomlValue::Kind::Number;
    return v;
  } catch (...) {
    raise(Errc::ManifestError, "unparseable value '" + raw + "' at line " + std::to_string(line_no));
  }
}

using Section = std::map<std::string, TomlValue>;

inline std::map<std::string, Section> parse_toml_subset(std::istream& in) {
  std::map<std::string, Section> sections;
  std::string current = "";
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments, but leave '#' alone inside quoted values
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      const auto last_quote = line.rfind('"');
      if (last_quote == std::string::npos || hash > last_quote) line = line.substr(0, hash);
    }
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        raise(Errc::ManifestError, "bad section header at line " + std::to_string(line_no));
      current = trim(text.substr(1, text.size() - 2));
      sections.try_emplace(current);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      raise(Errc::ManifestError, "expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(text.substr(0, eq));
    sections[current][key] = parse_value(trim(text.substr(eq + 1)), line_no);
  }
  return sections;
}

inline double number_or(const Section& s, const std::string& key, double fallback) {
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  if (it->second.kind != TomlValue::Kind::Number)
    raise(Errc::ManifestError, "'" + key + "' must be a number");
  return it->second.num;
}

inline std::string string_or(const Section& s, const std::string& key, const std::string& fallback) {
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  if (it->second.kind != TomlValue::Kind::String)
    raise(Errc::ManifestError, "'" + key + "' must be a string");
  return it->second.str;
}

}  // namespace detail

inline Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  const auto sections = detail::parse_toml_subset(in);
  Manifest m;
  m.base_dir = base_dir;

  if (const auto it = sections.find("general"); it != sections.end()) {
    const auto& g = it->second;
    m.seed = static_cast<std::uint64_t>(detail::number_or(g, "seed", 0));
    if (const auto lt = g.find("lenient"); lt != g.end()) m.lenient = lt->second.boolean;
    m.out_dir = detail::string_or(g, "out_dir", "out");
  }
  m.generation.mix.seed = m.seed;

  if (const auto it = sections.find("generation"); it != sections.end()) {
    const auto& g = it->second;
    m.generation.provider = detail::string_or(g, "provider", "mock");
    m.generation.model = detail::string_or(g, "model", "default");
    m.generation.provider_concurrency = static_cast<int>(
        detail::number_or(g, "provider_concurrency", m.generation.provider_concurrency));
    if (m.generation.provider_concurrency < 1)
      raise(Errc::ManifestError, "provider_concurrency must be >= 1");
    auto& mix = m.generation.mix;
    mix.multi_turn_fraction = detail::number_or(g, "multi_turn_fraction", mix.multi_turn_fraction);
    mix.records_per_annotation = static_cast<int>(
        detail::number_or(g, "records_per_annotation", mix.records_per_annotation));
    mix.max_turns = static_cast<int>(detail::number_or(g, "max_turns", mix.max_turns));
    for (auto fmt : all_answer_formats()) {
      const std::string key = "format_" + std::string(to_string(fmt));
      mix.format_fractions[fmt] = detail::number_or(g, key, mix.format_fractions[fmt]);
    }
    const int tw = static_cast<int>(detail::number_or(g, "target_width", 0));
    const int th = static_cast<int>(detail::number_or(g, "target_height", 0));
    if (tw > 0 && th > 0) m.generation.target_dims = ImageDims{tw, th};
  }

  std::set<std::string> names;
  for (const auto& [header, body] : sections) {
    if (header.rfind("dataset.", 0) != 0) continue;
    DatasetEntry entry;
    entry.name = header.substr(8);
    if (entry.name.empty()) raise(Errc::ManifestError, "dataset section without a name");
    if (!names.insert(entry.name).second)
      raise(Errc::ManifestError, "duplicate dataset name '" + entry.name + "'");
    const std::string fmt = detail::string_or(body, "format", "");
    const auto parsed = dataset_format_from_string(fmt);
    if (!parsed)
      raise(Errc::ManifestError, "dataset '" + entry.name + "' has unknown format '" + fmt + "'");
    entry.format = *parsed;
    const std::string root = detail::string_or(body, "root", "");
    if (root.empty()) raise(Errc::ManifestError, "dataset '" + entry.name + "' missing root");
    entry.root = std::filesystem::path(root).is_absolute() ? std::filesystem::path(root)
                                                           : base_dir / root;
    if (const auto it = body.find("classes"); it != body.end()) entry.classes = it->second.array;
    m.datasets.push_back(std::move(entry));
  }

  return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

}  // namespace pavekit::cli
