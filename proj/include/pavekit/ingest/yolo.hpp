#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pavekit/ingest/raw_record.hpp"

namespace pavekit::ingest {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

inline bool parse_int(std::string_view s, int& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

}  // namespace detail

// One label file per image: "class cx cy w h" per line, coordinates in [0,1].
inline RawRecord parse_yolo(std::string_view label_text, const std::vector<std::string>& class_names,
                            std::string_view image_ref = {}) {
  YoloBoxes payload;
  payload.class_names = class_names;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= label_text.size()) {
    std::size_t end = label_text.find('\n', start);
    if (end == std::string_view::npos) end = label_text.size();
    std::string_view line = label_text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    const auto fields = detail::split_ws(line);
    if (fields.empty()) {
      if (start > label_text.size()) break;
      continue;
    }
    if (fields.size() != 5)
      raise(Errc::MalformedLine,
            "line " + std::to_string(line_no) + ": expected 5 fields, got " + std::to_string(fields.size()));

    int class_index = 0;
    if (!detail::parse_int(fields[0], class_index) || class_index < 0)
      raise(Errc::MalformedLine, "line " + std::to_string(line_no) + ": bad class index");
    if (class_index >= static_cast<int>(class_names.size()))
      raise(Errc::ClassIndexOutOfRange, "line " + std::to_string(line_no) + ": class " +
                                            std::to_string(class_index) + " >= " +
                                            std::to_string(class_names.size()));

    double v[4];
    for (int k = 0; k < 4; ++k)
      if (!detail::parse_double(fields[k + 1], v[k]))
        raise(Errc::MalformedLine, "line " + std::to_string(line_no) + ": non-numeric coordinate");

    for (double c : v)
      if (c < -kBoxNormEps || c > 1 + kBoxNormEps)
        raise(Errc::CoordOutOfRange, "line " + std::to_string(line_no) + ": coordinate outside [0,1]");

    payload.boxes.push_back({class_index, make_box_norm(std::clamp(v[0], 0.0, 1.0),
                                                        std::clamp(v[1], 0.0, 1.0),
                                                        std::clamp(v[2], 0.0, 1.0),
                                                        std::clamp(v[3], 0.0, 1.0))});
    if (end == label_text.size()) break;
  }

  return {std::string(image_ref), std::move(payload), ""};
}

}  // namespace pavekit::ingest
