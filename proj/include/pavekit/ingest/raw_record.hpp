#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pavekit/core/types.hpp"

namespace pavekit::ingest {

struct YoloBox {
  int class_index = 0;
  BoxNorm box;

  bool operator==(const YoloBox&) const = default;
};

struct YoloBoxes {
  std::vector<YoloBox> boxes;
  std::vector<std::string> class_names;  // index -> source label
};

struct VocObject {
  std::string label;
  BoxAbs box;

  bool operator==(const VocObject&) const = default;
};

struct VocBoxes {
  std::vector<VocObject> objects;
  ImageDims dims;
};

struct CocoInstance {
  std::string label;
  BoxAbs box;
  std::optional<Severity> severity;

  bool operator==(const CocoInstance&) const = default;
};

struct CocoInstances {
  std::vector<CocoInstance> instances;
  ImageDims dims;
};

struct ColorClass {
  ConditionColor color = ConditionColor::Green;
};

struct PciRow {
  PciScore score;
};

using RawPayload = std::variant<YoloBoxes, VocBoxes, CocoInstances, ColorClass, PciRow>;

struct RawRecord {
  std::string image_ref;
  RawPayload payload;
  std::string source_dataset;  // filled by the ingest driver
};

}  // namespace pavekit::ingest
