#pragma once

#include <algorithm>
#include <filesystem>
#include <string>

#include "pavekit/ingest/raw_record.hpp"

namespace pavekit::ingest {

// Color-coded folder layout: .../<Color>/<image>. The parent directory name
// is the condition color (Green/Blue/Yellow/Red, case-insensitive).
inline RawRecord parse_color_folder(const std::filesystem::path& file_path) {
  const std::string folder = file_path.parent_path().filename().string();
  std::string key = folder;
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  ConditionColor color;
  if (key == "green") color = ConditionColor::Green;
  else if (key == "blue") color = ConditionColor::Blue;
  else if (key == "yellow") color = ConditionColor::Yellow;
  else if (key == "red") color = ConditionColor::Red;
  else raise(Errc::UnknownColorFolder, "'" + folder + "' is not a condition color");

  return {file_path.string(), ColorClass{color}, ""};
}

}  // namespace pavekit::ingest
