#pragma once

#include <algorithm>
#include <string>

#include "pavekit/core/labels.hpp"
#include "pavekit/ingest/raw_record.hpp"

namespace pavekit::harmonize {

// Center/size fractions to absolute corner coordinates:
// (cx*W - w*W/2, cy*H - h*H/2, cx*W + w*W/2, cy*H + h*H/2), clamped to the
// image. Overshoot beyond the normalized-box tolerance is rejected.
inline BoxAbs yolo_to_absolute(const BoxNorm& box, const ImageDims& dims, bool strict = false) {
  const double W = dims.width, H = dims.height;
  const double x_min = box.cx * W - box.w * W / 2;
  const double y_min = box.cy * H - box.h * H / 2;
  const double x_max = box.cx * W + box.w * W / 2;
  const double y_max = box.cy * H + box.h * H / 2;

  const double eps_x = kBoxNormEps * W, eps_y = kBoxNormEps * H;
  if (x_min < -eps_x || y_min < -eps_y || x_max > W + eps_x || y_max > H + eps_y)
    raise(Errc::BoxOutsideImage, "converted box overshoots image bounds");

  BoxAbs out{std::clamp(x_min, 0.0, W), std::clamp(y_min, 0.0, H), std::clamp(x_max, 0.0, W),
             std::clamp(y_max, 0.0, H)};
  if (strict && out.area() == 0.0) raise(Errc::DegenerateBox, "zero-area box");
  return out;
}

// Inverse of yolo_to_absolute (unclamped interior boxes round-trip exactly).
inline BoxNorm absolute_to_norm(const BoxAbs& box, const ImageDims& dims) {
  const double W = dims.width, H = dims.height;
  return {(box.x_min + box.x_max) / (2 * W), (box.y_min + box.y_max) / (2 * H),
          (box.x_max - box.x_min) / W, (box.y_max - box.y_min) / H};
}

struct ScaleFactors {
  double s_x = 1;
  double s_y = 1;
};

inline ScaleFactors scale_factors(const ImageDims& orig, const ImageDims& target) {
  return {static_cast<double>(target.width) / orig.width,
          static_cast<double>(target.height) / orig.height};
}

inline BoxAbs rescale_box(const BoxAbs& box, const ImageDims& orig, const ImageDims& target) {
  if (!box_within(box, orig))
    raise(Errc::BoxOutsideImage, "box lies outside the original image dims");
  const auto [s_x, s_y] = scale_factors(orig, target);
  return {box.x_min * s_x, box.y_min * s_y, box.x_max * s_x, box.y_max * s_y};
}

// Format unification: dispatch on the payload variant. Each source format
// contributes the components it has (spatial, semantic, condition).
inline UnifiedAnnotation unify(const ingest::RawRecord& record, const ImageDims& dims,
                               const AliasTable& aliases = AliasTable::builtin()) {
  UnifiedAnnotation out;
  out.image_ref = record.image_ref;
  out.source_dataset = record.source_dataset;
  out.dims = dims;

  if (const auto* yolo = std::get_if<ingest::YoloBoxes>(&record.payload)) {
    for (const auto& entry : yolo->boxes) {
      const std::string& source_label = yolo->class_names.at(entry.class_index);
      out.instances.push_back({yolo_to_absolute(entry.box, dims),
                               aliases.canonicalize(source_label, record.source_dataset),
                               std::nullopt});
    }
  } else if (const auto* voc = std::get_if<ingest::VocBoxes>(&record.payload)) {
    out.dims = voc->dims;
    for (const auto& obj : voc->objects)
      out.instances.push_back(
          {obj.box, aliases.canonicalize(obj.label, record.source_dataset), std::nullopt});
  } else if (const auto* coco = std::get_if<ingest::CocoInstances>(&record.payload)) {
    out.dims = coco->dims;
    for (const auto& inst : coco->instances)
      out.instances.push_back(
          {inst.box, aliases.canonicalize(inst.label, record.source_dataset), inst.severity});
  } else if (const auto* color = std::get_if<ingest::ColorClass>(&record.payload)) {
    out.condition = condition_from_color(color->color);
  } else if (const auto* pci = std::get_if<ingest::PciRow>(&record.payload)) {
    out.pci = pci->score;
  }

  for (const auto& inst : out.instances)
    if (!box_within(inst.box, out.dims, 1e-6 * std::max(out.dims.width, out.dims.height)))
      raise(Errc::BoxOutsideImage, "instance box outside image on " + out.image_ref);

  return out;
}

}  // namespace pavekit::harmonize
