#pragma once

#include <cmath>
#include <vector>

#include "pavekit/core/types.hpp"
#include "pavekit/error.hpp"

namespace pavekit::harmonize {

// Eight compass sectors for the center-to-center vector in image coordinates
// (y grows downward, so North points toward smaller y). Self marks the
// diagonal and coincident centers.
enum class Direction { North, NorthEast, East, SouthEast, South, SouthWest, West, NorthWest, Self };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::North: return "N";
    case Direction::NorthEast: return "NE";
    case Direction::East: return "E";
    case Direction::SouthEast: return "SE";
    case Direction::South: return "S";
    case Direction::SouthWest: return "SW";
    case Direction::West: return "W";
    case Direction::NorthWest: return "NW";
    case Direction::Self: return "Self";
  }
  return "?";
}

// Sector boundaries (45 degrees wide, centered on the compass points) assign
// ties to the clockwise-earlier sector, so boundary at 22.5 degrees is North.
inline Direction sector_from_degrees(double deg) {
  deg = std::fmod(deg, 360.0);
  if (deg < 0) deg += 360.0;
  int sector = static_cast<int>(std::ceil((deg - 22.5) / 45.0));
  sector = ((sector % 8) + 8) % 8;
  static constexpr Direction dirs[8] = {Direction::North, Direction::NorthEast, Direction::East,
                                        Direction::SouthEast, Direction::South, Direction::SouthWest,
                                        Direction::West, Direction::NorthWest};
  return dirs[sector];
}

inline Direction compass_sector(double dx, double dy) {
  if (dx == 0.0 && dy == 0.0) return Direction::Self;
  return sector_from_degrees(std::atan2(dx, -dy) * 180.0 / M_PI);  // 0 = North, 90 = East
}

struct SpatialCell {
  double center_distance = 0;
  double overlap_iou = 0;
  Direction direction = Direction::Self;
};

struct SpatialRelationMatrix {
  std::size_t n = 0;
  std::vector<SpatialCell> cells;  // row-major n*n

  const SpatialCell& at(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
  SpatialCell& at(std::size_t i, std::size_t j) { return cells[i * n + j]; }
};

// Pairwise proximity, overlap, and direction for all instances of one image.
inline SpatialRelationMatrix spatial_relations(const UnifiedAnnotation& annotation) {
  const std::size_t n = annotation.instances.size();
  if (n == 0) raise(Errc::EmptyAnnotation, "no instances on " + annotation.image_ref);

  SpatialRelationMatrix m;
  m.n = n;
  m.cells.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const BoxAbs& a = annotation.instances[i].box;
    for (std::size_t j = 0; j < n; ++j) {
      const BoxAbs& b = annotation.instances[j].box;
      SpatialCell cell;
      if (i == j) {
        cell = {0.0, 1.0, Direction::Self};
      } else {
        const double dx = b.center_x() - a.center_x();
        const double dy = b.center_y() - a.center_y();
        cell.center_distance = std::hypot(dx, dy);
        cell.overlap_iou = iou(a, b);
        cell.direction = compass_sector(dx, dy);
      }
      m.at(i, j) = cell;
    }
  }
  return m;
}

}  // namespace pavekit::harmonize
