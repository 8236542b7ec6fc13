#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pavekit/harmonize/spatial.hpp"
#include "pavekit/harmonize/transforms.hpp"

using namespace pavekit;
using namespace pavekit::harmonize;

namespace {

// independent inverse of the center/size-to-corner conversion
BoxNorm analytic_inverse(const BoxAbs& box, const ImageDims& dims) {
  const double W = dims.width, H = dims.height;
  return {(box.x_min + box.x_max) / (2.0 * W), (box.y_min + box.y_max) / (2.0 * H),
          (box.x_max - box.x_min) / W, (box.y_max - box.y_min) / H};
}

UnifiedAnnotation annotation_with_boxes(const std::vector<BoxAbs>& boxes) {
  UnifiedAnnotation a;
  a.image_ref = "t/img.png";
  a.dims = {1000, 1000};
  for (const auto& b : boxes) a.instances.push_back({b, {"pothole", "pothole", "t"}, std::nullopt});
  return a;
}

}  // namespace

TEST_CASE("center-size conversion anchors") {
  // full-image box is the identity case
  CHECK(yolo_to_absolute({0.5, 0.5, 1.0, 1.0}, {640, 480}) == BoxAbs{0, 0, 640, 480});

  // independent arithmetic: cx*W = 250, w*W/2 = 50 -> [200,300]; cy*H = 250, h*H/2 = 50
  CHECK(yolo_to_absolute({0.25, 0.5, 0.1, 0.2}, {1000, 500}) == BoxAbs{200, 200, 300, 300});

  CHECK_THROWS_AS(yolo_to_absolute({0.5, 0.5, 0.0, 0.0}, {640, 480}, /*strict=*/true), Error);
  CHECK_NOTHROW(yolo_to_absolute({0.5, 0.5, 0.0, 0.0}, {640, 480}));
}

TEST_CASE("conversion round-trips against the analytic inverse") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> center(0.25, 0.75), size(0.01, 0.45);
  std::uniform_int_distribution<int> dim(16, 4096);
  for (int i = 0; i < 1000; ++i) {
    const double cx = center(rng), cy = center(rng);
    const BoxNorm box{cx, cy, std::min({size(rng), 2 * cx, 2 * (1 - cx)}),
                      std::min({size(rng), 2 * cy, 2 * (1 - cy)})};
    const ImageDims dims{dim(rng), dim(rng)};
    const BoxNorm back = analytic_inverse(yolo_to_absolute(box, dims), dims);
    CHECK(std::abs(back.cx - box.cx) < 1e-9);
    CHECK(std::abs(back.cy - box.cy) < 1e-9);
    CHECK(std::abs(back.w - box.w) < 1e-9);
    CHECK(std::abs(back.h - box.h) < 1e-9);
  }
}

TEST_CASE("rescale_box anchors and composability") {
  CHECK(rescale_box({100, 100, 200, 200}, {1000, 1000}, {500, 500}) == BoxAbs{50, 50, 100, 100});
  CHECK(rescale_box({3, 7, 40, 80}, {100, 100}, {100, 100}) == BoxAbs{3, 7, 40, 80});
  CHECK_THROWS_AS(rescale_box({900, 0, 1100, 100}, {1000, 1000}, {500, 500}), Error);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_int_distribution<int> dim(32, 2048);
  for (int i = 0; i < 500; ++i) {
    const ImageDims a{dim(rng), dim(rng)}, b{dim(rng), dim(rng)}, c{dim(rng), dim(rng)};
    const double x1 = frac(rng) * a.width / 2, y1 = frac(rng) * a.height / 2;
    const BoxAbs box{x1, y1, x1 + frac(rng) * (a.width - x1), y1 + frac(rng) * (a.height - y1)};
    const BoxAbs direct = rescale_box(box, a, c);
    const BoxAbs chained = rescale_box(rescale_box(box, a, b), b, c);
    CHECK(std::abs(direct.x_min - chained.x_min) < 1e-9);
    CHECK(std::abs(direct.y_min - chained.y_min) < 1e-9);
    CHECK(std::abs(direct.x_max - chained.x_max) < 1e-9);
    CHECK(std::abs(direct.y_max - chained.y_max) < 1e-9);
  }
}

TEST_CASE("unify dispatches by payload variant") {
  ingest::RawRecord yolo{"rdd2022/images/a.png",
                         ingest::YoloBoxes{{{0, {0.25, 0.25, 0.125, 0.25}}, {3, {0.5, 0.5, 0.25, 0.25}}},
                                           {"D00", "D10", "D20", "D40"}},
                         "rdd2022"};
  const auto unified = unify(yolo, {640, 480});
  CHECK(unified.instances.size() == 2);
  CHECK(unified.instances[0].distress.canonical_label == "longitudinal crack");
  CHECK(unified.instances[1].distress.canonical_label == "pothole");
  CHECK_FALSE(unified.condition.has_value());
  CHECK_FALSE(unified.pci.has_value());

  ingest::RawRecord color{"pcier/Blue/b1.png", ingest::ColorClass{ConditionColor::Blue}, "pcier"};
  const auto cond = unify(color, {512, 512});
  REQUIRE(cond.condition.has_value());
  CHECK(cond.condition->label == ConditionLabel::Fair);
  CHECK(cond.instances.empty());

  ingest::RawRecord pci{"dsps24/images/p1.png", ingest::PciRow{{41.0}}, "dsps24"};
  const auto scored = unify(pci, {640, 480});
  REQUIRE(scored.pci.has_value());
  CHECK(scored.pci->value == 41.0);
  CHECK(scored.instances.empty());
}

TEST_CASE("unify preserves instance counts and severities exactly") {
  ingest::CocoInstances payload;
  payload.dims = {640, 640};
  payload.instances = {{"alligator", make_box_abs(50, 60, 350, 340), Severity::High},
                       {"longitudinal", make_box_abs(400, 100, 480, 500), Severity::Low},
                       {"manhole", make_box_abs(10, 10, 60, 60), std::nullopt}};
  ingest::RawRecord rec{"dsps23/images/c1.png", payload, "dsps23"};
  const auto unified = unify(rec, {640, 640});
  REQUIRE(unified.instances.size() == 3);
  CHECK(unified.instances[0].severity == Severity::High);
  CHECK(unified.instances[1].severity == Severity::Low);
  CHECK_FALSE(unified.instances[2].severity.has_value());
  CHECK(unified.instances[0].distress.canonical_label == "alligator crack");
}

TEST_CASE("spatial_relations fills the full matrix with fixed diagonal") {
  const auto single = spatial_relations(annotation_with_boxes({{0, 0, 10, 10}}));
  REQUIRE(single.n == 1);
  CHECK(single.at(0, 0).center_distance == 0.0);
  CHECK(single.at(0, 0).overlap_iou == 1.0);
  CHECK(single.at(0, 0).direction == Direction::Self);

  const auto twins = spatial_relations(annotation_with_boxes({{0, 0, 10, 10}, {0, 0, 10, 10}}));
  CHECK(twins.at(0, 1).overlap_iou == 1.0);
  CHECK(twins.at(0, 1).center_distance == 0.0);

  // brute-force geometry: centers (5,5) and (25,5) -> distance 20, no overlap,
  // column instance due east of row instance
  const auto pair = spatial_relations(annotation_with_boxes({{0, 0, 10, 10}, {20, 0, 30, 10}}));
  CHECK(pair.at(0, 1).center_distance == Catch::Approx(20.0));
  CHECK(pair.at(0, 1).overlap_iou == 0.0);
  CHECK(pair.at(0, 1).direction == Direction::East);
  CHECK(pair.at(1, 0).direction == Direction::West);

  UnifiedAnnotation empty;
  empty.dims = {100, 100};
  CHECK_THROWS_AS(spatial_relations(empty), Error);
}

TEST_CASE("spatial relation matrices are symmetric with opposite directions") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(0, 900), size(1, 100);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BoxAbs> boxes;
    const int n = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      const double x = coord(rng), y = coord(rng);
      boxes.push_back({x, y, x + size(rng), y + size(rng)});
    }
    const auto m = spatial_relations(annotation_with_boxes(boxes));
    for (std::size_t i = 0; i < m.n; ++i) {
      for (std::size_t j = 0; j < m.n; ++j) {
        CHECK(m.at(i, j).center_distance == Catch::Approx(m.at(j, i).center_distance));
        CHECK(m.at(i, j).overlap_iou == Catch::Approx(m.at(j, i).overlap_iou));
        if (i != j && m.at(i, j).direction != Direction::Self) {
          const int d1 = static_cast<int>(m.at(i, j).direction);
          const int d2 = static_cast<int>(m.at(j, i).direction);
          CHECK((d1 + 4) % 8 == d2);
        }
      }
    }
  }
}

TEST_CASE("compass sector ties go to the clockwise-earlier sector") {
  // boundaries land on the clockwise-earlier sector
  CHECK(sector_from_degrees(22.5) == Direction::North);
  CHECK(sector_from_degrees(67.5) == Direction::NorthEast);
  CHECK(sector_from_degrees(337.5) == Direction::NorthWest);
  CHECK(sector_from_degrees(22.5 + 1e-9) == Direction::NorthEast);
  CHECK(sector_from_degrees(22.5 - 1e-9) == Direction::North);
  // the 180-degree opposite of a boundary is again a boundary, kept consistent
  CHECK(sector_from_degrees(202.5) == Direction::South);

  CHECK(compass_sector(0, -1) == Direction::North);
  CHECK(compass_sector(1, 0) == Direction::East);
  CHECK(compass_sector(0, 1) == Direction::South);
  CHECK(compass_sector(-1, 0) == Direction::West);
  CHECK(compass_sector(1, 1) == Direction::SouthEast);
}
