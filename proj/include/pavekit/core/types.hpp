#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pavekit/core/taxonomy.hpp"
#include "pavekit/error.hpp"

namespace pavekit {

struct ImageDims {
  int width = 0;
  int height = 0;

  bool operator==(const ImageDims&) const = default;
};

inline ImageDims make_dims(int width, int height) {
  if (width < 1 || height < 1)
    raise(Errc::InvalidArgument, "image dims must be positive, got " + std::to_string(width) + "x" +
                                     std::to_string(height));
  return {width, height};
}

// Tolerance for normalized boxes that overflow [0,1] by float rounding.
inline constexpr double kBoxNormEps = 1e-6;

// Center/size box, all fields fractions of the image edge lengths.
struct BoxNorm {
  double cx = 0, cy = 0, w = 0, h = 0;

  bool operator==(const BoxNorm&) const = default;
};

inline BoxNorm make_box_norm(double cx, double cy, double w, double h, double eps = kBoxNormEps) {
  for (double v : {cx, cy, w, h})
    if (!(v >= 0.0 && v <= 1.0))
      raise(Errc::CoordOutOfRange, "normalized coordinate outside [0,1]");
  if (cx - w / 2 < -eps || cx + w / 2 > 1 + eps || cy - h / 2 < -eps || cy + h / 2 > 1 + eps)
    raise(Errc::CoordOutOfRange, "normalized box extends past the image edge");
  return {cx, cy, w, h};
}

// Corner box in absolute pixel coordinates, (x_min,y_min) = top-left.
struct BoxAbs {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double center_x() const { return (x_min + x_max) / 2; }
  double center_y() const { return (y_min + y_max) / 2; }

  bool operator==(const BoxAbs&) const = default;
};

inline BoxAbs make_box_abs(double x_min, double y_min, double x_max, double y_max) {
  if (x_min < 0 || y_min < 0) raise(Errc::InvalidArgument, "absolute box coordinates must be non-negative");
  if (x_min > x_max || y_min > y_max) raise(Errc::InvertedBox, "box corners are inverted");
  return {x_min, y_min, x_max, y_max};
}

inline bool box_within(const BoxAbs& box, const ImageDims& dims, double eps = 1e-9) {
  return box.x_min >= -eps && box.y_min >= -eps && box.x_max <= dims.width + eps &&
         box.y_max <= dims.height + eps;
}

// Intersection-over-union of two corner boxes; 0 when disjoint or both degenerate.
inline double iou(const BoxAbs& a, const BoxAbs& b) {
  const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

enum class ConditionColor { Green, Blue, Yellow, Red };
enum class ConditionLabel { Good, Fair, Poor, Failed };

struct PciRange {
  int lo = 0;
  int hi = 0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const PciRange&) const = default;
};

struct ConditionClass {
  ConditionLabel label = ConditionLabel::Good;
  std::optional<ConditionColor> source_color;
  PciRange pci_range;

  bool operator==(const ConditionClass&) const = default;
};

inline PciRange pci_range_of(ConditionLabel label) {
  switch (label) {
    case ConditionLabel::Good: return {70, 100};
    case ConditionLabel::Fair: return {50, 69};
    case ConditionLabel::Poor: return {25, 49};
    case ConditionLabel::Failed: return {0, 24};
  }
  return {0, 0};
}

inline ConditionLabel condition_label_of(ConditionColor color) {
  switch (color) {
    case ConditionColor::Green: return ConditionLabel::Good;
    case ConditionColor::Blue: return ConditionLabel::Fair;
    case ConditionColor::Yellow: return ConditionLabel::Poor;
    case ConditionColor::Red: return ConditionLabel::Failed;
  }
  return ConditionLabel::Good;
}

inline ConditionClass condition_from_color(ConditionColor color) {
  const ConditionLabel label = condition_label_of(color);
  return {label, color, pci_range_of(label)};
}

inline ConditionClass condition_from_label(ConditionLabel label) {
  return {label, std::nullopt, pci_range_of(label)};
}

inline std::string_view to_string(ConditionLabel label) {
  switch (label) {
    case ConditionLabel::Good: return "Good";
    case ConditionLabel::Fair: return "Fair";
    case ConditionLabel::Poor: return "Poor";
    case ConditionLabel::Failed: return "Failed";
  }
  return "unknown";
}

inline std::string_view to_string(ConditionColor color) {
  switch (color) {
    case ConditionColor::Green: return "Green";
    case ConditionColor::Blue: return "Blue";
    case ConditionColor::Yellow: return "Yellow";
    case ConditionColor::Red: return "Red";
  }
  return "unknown";
}

inline std::optional<ConditionLabel> condition_label_from_string(std::string_view s) {
  for (auto l : {ConditionLabel::Good, ConditionLabel::Fair, ConditionLabel::Poor, ConditionLabel::Failed})
    if (to_string(l) == s) return l;
  return std::nullopt;
}

struct PciScore {
  double value = 0;

  bool operator==(const PciScore&) const = default;
};

inline PciScore make_pci(double value) {
  if (!(value >= 0.0 && value <= 100.0))
    raise(Errc::PciOutOfRange, "PCI " + std::to_string(value) + " outside [0,100]");
  return {value};
}

enum class Severity { Low, Medium, High };

inline std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Low: return "Low";
    case Severity::Medium: return "Medium";
    case Severity::High: return "High";
  }
  return "unknown";
}

inline std::optional<Severity> severity_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "low") return Severity::Low;
  if (lower == "medium") return Severity::Medium;
  if (lower == "high") return Severity::High;
  return std::nullopt;
}

struct DistressClass {
  std::string canonical_label;
  std::string source_label;
  std::string source_dataset;

  bool operator==(const DistressClass&) const = default;
};

struct Instance {
  BoxAbs box;
  DistressClass distress;
  std::optional<Severity> severity;

  bool operator==(const Instance&) const = default;
};

struct UnifiedAnnotation {
  std::string image_ref;
  ImageDims dims;
  std::vector<Instance> instances;
  std::optional<ConditionClass> condition;
  std::optional<PciScore> pci;
  std::string source_dataset;
};

enum class LengthVariant { Short, Medium, Long };

inline constexpr std::array<LengthVariant, 3> kAllLengthVariants = {
    LengthVariant::Short, LengthVariant::Medium, LengthVariant::Long};

inline std::string_view to_string(LengthVariant v) {
  switch (v) {
    case LengthVariant::Short: return "short";
    case LengthVariant::Medium: return "medium";
    case LengthVariant::Long: return "long";
  }
  return "unknown";
}

inline std::optional<LengthVariant> length_from_string(std::string_view s) {
  for (auto v : kAllLengthVariants)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

enum class Role { User, Assistant };

struct Turn {
  Role role = Role::User;
  std::string text;

  bool operator==(const Turn&) const = default;
};

// Integer-rendered box carried as a record's answer key.
struct GtBox {
  std::string label;
  std::array<long long, 4> box{};
  std::optional<Severity> severity;

  bool operator==(const GtBox&) const = default;
};

struct GroundTruth {
  std::optional<ImageDims> dims;
  std::vector<GtBox> boxes;
  std::optional<double> pci;
  std::optional<std::string> condition;
  std::optional<std::string> answer;
  std::optional<char> choice;
  std::map<std::string, std::string> fields;

  bool empty() const {
    return !dims && boxes.empty() && !pci && !condition && !answer && !choice && fields.empty();
  }
};

struct InstructionRecord {
  std::string record_id;
  std::vector<std::string> image_refs;
  TaskId task = TaskId::SingleObjectGrounding;
  LengthVariant length = LengthVariant::Short;
  std::vector<Turn> turns;
  AnswerFormat answer_format = AnswerFormat::Descriptive;
  std::string source_dataset;
  GroundTruth ground_truth;

  bool multi_turn() const { return turns.size() >= 4; }

  // All assistant text, newline-joined. Used by stats and self-evaluation.
  std::string assistant_text() const {
    std::string out;
    for (const auto& t : turns) {
      if (t.role != Role::Assistant) continue;
      if (!out.empty()) out += '\n';
      out += t.text;
    }
    return out;
  }
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 1469598103934665603ull) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

// Content-addressed id: regeneration from identical inputs yields identical ids.
inline std::string compute_record_id(const InstructionRecord& rec) {
  std::uint64_t h = detail::fnv1a64(to_string(rec.task));
  h = detail::fnv1a64(to_string(rec.length), h);
  for (const auto& ref : rec.image_refs) h = detail::fnv1a64(ref, h);
  for (const auto& turn : rec.turns) {
    h = detail::fnv1a64(turn.role == Role::User ? "u" : "a", h);
    h = detail::fnv1a64(turn.text, h);
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("rec-") + buf;
}

}  // namespace pavekit
