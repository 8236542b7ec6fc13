#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pavekit/ingest/raw_record.hpp"

namespace pavekit::ingest {

namespace detail {

// "alligator_high" -> ("alligator", High); categories without a trailing
// severity token pass through with severity absent.
inline std::pair<std::string, std::optional<Severity>> split_severity_suffix(std::string_view name) {
  const auto pos = name.rfind('_');
  if (pos != std::string_view::npos) {
    if (auto sev = severity_from_string(name.substr(pos + 1)))
      return {std::string(name.substr(0, pos)), sev};
  }
  return {std::string(name), std::nullopt};
}

}  // namespace detail

// COCO-style detection document. bbox is [x, y, w, h]; converted to corner
// form. Emits one RawRecord per image, in document order of the images array.
inline std::vector<RawRecord> parse_coco(std::string_view json_document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_document);
  } catch (const nlohmann::json::parse_error& e) {
    raise(Errc::MalformedJson, e.what());
  }
  if (!doc.is_object() || !doc.contains("images") || !doc.contains("annotations") ||
      !doc.contains("categories"))
    raise(Errc::MalformedJson, "expected images/annotations/categories members");

  std::map<std::int64_t, std::string> category_names;
  for (const auto& cat : doc["categories"]) {
    if (!cat.contains("id") || !cat.contains("name")) raise(Errc::MalformedJson, "bad category entry");
    category_names[cat["id"].get<std::int64_t>()] = cat["name"].get<std::string>();
  }

  std::vector<RawRecord> records;
  std::map<std::int64_t, std::size_t> image_index;
  for (const auto& img : doc["images"]) {
    if (!img.contains("id") || !img.contains("width") || !img.contains("height"))
      raise(Errc::MalformedJson, "bad image entry");
    const auto id = img["id"].get<std::int64_t>();
    CocoInstances payload;
    payload.dims = make_dims(img["width"].get<int>(), img["height"].get<int>());
    image_index[id] = records.size();
    records.push_back({img.value("file_name", ""), std::move(payload), ""});
  }

  for (const auto& ann : doc["annotations"]) {
    if (!ann.contains("image_id") || !ann.contains("category_id") || !ann.contains("bbox"))
      raise(Errc::MalformedJson, "bad annotation entry");
    const auto image_id = ann["image_id"].get<std::int64_t>();
    const auto it = image_index.find(image_id);
    if (it == image_index.end())
      raise(Errc::DanglingImageId, "annotation references unknown image " + std::to_string(image_id));
    const auto cat_it = category_names.find(ann["category_id"].get<std::int64_t>());
    if (cat_it == category_names.end())
      raise(Errc::MalformedJson, "annotation references unknown category");

    const auto& bbox = ann["bbox"];
    if (!bbox.is_array() || bbox.size() != 4) raise(Errc::MalformedJson, "bbox must be [x,y,w,h]");
    const double x = bbox[0].get<double>(), y = bbox[1].get<double>();
    const double w = bbox[2].get<double>(), h = bbox[3].get<double>();
    if (w < 0 || h < 0)
      raise(Errc::NegativeExtent, "bbox with negative extent on image " + std::to_string(image_id));

    auto [label, severity] = detail::split_severity_suffix(cat_it->second);
    auto& instances = std::get<CocoInstances>(records[it->second].payload).instances;
    instances.push_back({label, make_box_abs(x, y, x + w, y + h), severity});
  }

  return records;
}

}  // namespace pavekit::ingest
