#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "pavekit/ingest/raw_record.hpp"

namespace pavekit::ingest {

// Pascal VOC XML: <size> dims plus zero or more <object><bndbox> corner boxes.
// Stored integers are kept as-is (inclusive pixel coordinates, no +-1 shift).
inline RawRecord parse_voc(std::string_view xml_document) {
  namespace pt = boost::property_tree;

  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml_document)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    raise(Errc::MalformedXml, e.what());
  }

  const auto annotation = tree.get_child_optional("annotation");
  if (!annotation) raise(Errc::MalformedXml, "missing <annotation> root");

  VocBoxes payload;
  const auto size = annotation->get_child_optional("size");
  if (!size) raise(Errc::MissingDims, "missing <size> element");
  const auto width = size->get_optional<int>("width");
  const auto height = size->get_optional<int>("height");
  if (!width || !height || *width < 1 || *height < 1)
    raise(Errc::MissingDims, "missing or invalid <width>/<height>");
  payload.dims = make_dims(*width, *height);

  for (const auto& [key, node] : *annotation) {
    if (key != "object") continue;
    const std::string label = node.get<std::string>("name", "");
    if (label.empty()) raise(Errc::MalformedXml, "<object> without <name>");
    const auto bnd = node.get_child_optional("bndbox");
    if (!bnd) raise(Errc::MalformedXml, "<object> without <bndbox>");
    double x_min, y_min, x_max, y_max;
    try {
      x_min = bnd->get<double>("xmin");
      y_min = bnd->get<double>("ymin");
      x_max = bnd->get<double>("xmax");
      y_max = bnd->get<double>("ymax");
    } catch (const pt::ptree_error& e) {
      raise(Errc::MalformedXml, std::string("bad <bndbox>: ") + e.what());
    }
    if (x_min > x_max || y_min > y_max)
      raise(Errc::InvertedBox, "bndbox corners inverted for '" + label + "'");
    payload.objects.push_back({label, make_box_abs(x_min, y_min, x_max, y_max)});
  }

  const std::string image_ref = annotation->get<std::string>("filename", "");
  return {image_ref, std::move(payload), ""};
}

}  // namespace pavekit::ingest
