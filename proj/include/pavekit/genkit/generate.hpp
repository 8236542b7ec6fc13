#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pavekit/genkit/prompts.hpp"
#include "pavekit/genkit/provider.hpp"
#include "pavekit/genkit/templates.hpp"

namespace pavekit::genkit {

namespace detail {

inline std::array<long long, 4> box_int(const BoxAbs& b) {
  return {std::llround(b.x_min), std::llround(b.y_min), std::llround(b.x_max), std::llround(b.y_max)};
}

inline std::string box_str(const std::array<long long, 4>& b) {
  return "[" + std::to_string(b[0]) + ", " + std::to_string(b[1]) + ", " + std::to_string(b[2]) +
         ", " + std::to_string(b[3]) + "]";
}

inline std::string box_str(const BoxAbs& b) { return box_str(box_int(b)); }

// Bracket-free coordinate ranges for descriptive text, so the answer-format
// grammar does not read prose as a coordinate answer.
inline std::string range_str(const BoxAbs& b) {
  const auto v = box_int(b);
  return "(x=" + std::to_string(v[0]) + "-" + std::to_string(v[2]) + ", y=" + std::to_string(v[1]) +
         "-" + std::to_string(v[3]) + ")";
}

inline std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15)
    return std::to_string(static_cast<long long>(std::llround(v)));
  std::ostringstream os;
  os << v;
  return os.str();
}

// largest-area instance, ties to the earliest
inline std::size_t focus_index(const UnifiedAnnotation& a) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.instances.size(); ++i)
    if (a.instances[i].box.area() > a.instances[best].box.area()) best = i;
  return best;
}

inline std::vector<std::size_t> by_area_desc(const UnifiedAnnotation& a) {
  std::vector<std::size_t> idx(a.instances.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return a.instances[x].box.area() > a.instances[y].box.area();
  });
  return idx;
}

inline std::string sector_phrase(const BoxAbs& b, const ImageDims& dims) {
  const double cx = b.center_x() / dims.width, cy = b.center_y() / dims.height;
  const char* row = cy < 1.0 / 3 ? "upper" : cy < 2.0 / 3 ? "middle" : "lower";
  const char* col = cx < 1.0 / 3 ? "left" : cx < 2.0 / 3 ? "center" : "right";
  return std::string(row) + "-" + col;
}

inline std::string treatment_for(std::string_view label) {
  if (label == "pothole") return "full-depth patching";
  if (label == "alligator crack") return "mill and overlay";
  if (label == "block crack") return "surface treatment";
  if (label == "rut") return "milling and resurfacing";
  if (label == "patch" || label == "repair") return "monitoring of the existing repair";
  if (label == "manhole") return "utility frame adjustment";
  if (label.find("crack") != std::string_view::npos) return "crack sealing";
  return "targeted surface repair";
}

inline std::optional<Severity> dominant_severity(const UnifiedAnnotation& a) {
  std::optional<Severity> out;
  for (const auto& inst : a.instances)
    if (inst.severity && (!out || static_cast<int>(*inst.severity) > static_cast<int>(*out)))
      out = inst.severity;
  return out;
}

inline std::vector<std::string> distinct_classes(const UnifiedAnnotation& a) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& inst : a.instances)
    if (seen.insert(inst.distress.canonical_label).second) out.push_back(inst.distress.canonical_label);
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline bool needs_repair(const UnifiedAnnotation& a) {
  if (auto sev = dominant_severity(a); sev && *sev == Severity::High) return true;
  if (a.condition && (a.condition->label == ConditionLabel::Poor ||
                      a.condition->label == ConditionLabel::Failed))
    return true;
  if (a.pci && a.pci->value < 50) return true;
  return a.instances.size() >= 3;
}

// Continuous thresholds so fractional scores between the integer band edges
// (e.g. 69.5) still land in the band below the next cutoff.
inline ConditionLabel band_of_pci(double v) {
  if (v >= pci_range_of(ConditionLabel::Good).lo) return ConditionLabel::Good;
  if (v >= pci_range_of(ConditionLabel::Fair).lo) return ConditionLabel::Fair;
  if (v >= pci_range_of(ConditionLabel::Poor).lo) return ConditionLabel::Poor;
  return ConditionLabel::Failed;
}

// One-phrase summary of whatever the annotation carries.
inline std::string content_phrase(const UnifiedAnnotation& a) {
  if (!a.instances.empty()) {
    const auto& focus = a.instances[focus_index(a)];
    return std::to_string(a.instances.size()) + " annotated distress instance" +
           (a.instances.size() == 1 ? "" : "s") + " dominated by the " +
           focus.distress.canonical_label;
  }
  if (a.condition)
    return "an overall condition rating of " + std::string(to_string(a.condition->label));
  if (a.pci) return "a recorded condition score of " + format_number(a.pci->value) + " out of 100";
  return "no recorded distresses or condition data";
}

}  // namespace detail

struct Rendered {
  std::string text;
  GroundTruth gt;
};

namespace detail {

inline const Instance& focus_instance(const UnifiedAnnotation& a) { return a.instances[focus_index(a)]; }

// correct option slot for multi-choice, stable per image
inline std::size_t choice_slot(const UnifiedAnnotation& a) {
  return pavekit::detail::fnv1a64(a.image_ref) % 3;
}

struct McOptions {
  std::vector<std::string> options;  // size 3
  std::size_t correct = 0;
};

inline McOptions mc_options(const UnifiedAnnotation& a) {
  const auto& focus = focus_instance(a);
  const std::string correct_text =
      "the " + focus.distress.canonical_label + " in the " + sector_phrase(focus.box, a.dims) +
      " region";

  std::vector<std::string> distractors;
  for (const auto& cls : distinct_classes(a))
    if (cls != focus.distress.canonical_label)
      distractors.push_back("the " + cls + " elsewhere in the section");
  for (const char* cls : {"transverse crack", "pothole", "patch", "longitudinal crack"}) {
    if (distractors.size() >= 2) break;
    if (cls != focus.distress.canonical_label)
      distractors.push_back(std::string("a ") + cls + " near the section edge");
  }
  distractors.resize(2);

  McOptions out;
  out.correct = choice_slot(a);
  out.options.resize(3);
  std::size_t d = 0;
  for (std::size_t i = 0; i < 3; ++i)
    out.options[i] = i == out.correct ? correct_text : distractors[d++];
  return out;
}

inline std::string corrective_claim(const UnifiedAnnotation& a) {
  const auto& focus = focus_instance(a);
  if (focus.severity) {
    const Severity wrong = *focus.severity == Severity::High ? Severity::Low : Severity::High;
    return "Field note: the " + focus.distress.canonical_label + " at " +
           range_str(focus.box) + " was logged as " + std::string(to_string(wrong)) + " severity.";
  }
  const std::string wrong =
      focus.distress.canonical_label == "pothole" ? "patch" : "pothole";
  return "Field note: the largest distress at " + range_str(focus.box) + " was logged as a " +
         wrong + ".";
}

}  // namespace detail

// Deterministic gold answer for (annotation, task, length). Instruction text
// is rendered separately; both only quote facts present in the annotation.
inline Rendered render_answer(const UnifiedAnnotation& a, TaskId task, LengthVariant length,
                              const UnifiedAnnotation* partner = nullptr) {
  using namespace detail;
  const int level = static_cast<int>(length);
  if (!annotation_supports(a, task))
    raise(Errc::IncompatibleAnnotation, std::string(to_string(task)) + " needs data missing from " +
                                            a.image_ref);
  Rendered r;
  if (a.dims.width > 0) r.gt.dims = a.dims;

  const auto add = [&](int min_level, const std::string& part, const char* sep = " ") {
    if (level >= min_level && !part.empty()) {
      if (!r.text.empty()) r.text += sep;
      r.text += part;
    }
  };
  const auto push_gt_box = [&](const Instance& inst) {
    r.gt.boxes.push_back({inst.distress.canonical_label, box_int(inst.box), inst.severity});
  };

  switch (task) {
    case TaskId::SingleObjectGrounding: {
      const auto& focus = focus_instance(a);
      push_gt_box(focus);
      add(0, box_str(focus.box));
      add(1, "This is the most prominent " + focus.distress.canonical_label + " on the section.");
      add(2, "It lies in the " + sector_phrase(focus.box, a.dims) + " portion of the image and spans about " +
                 std::to_string(std::llround(focus.box.width())) + " by " +
                 std::to_string(std::llround(focus.box.height())) + " pixels.");
      break;
    }
    case TaskId::MultiObjectEnumeration: {
      std::vector<std::string> lines;
      for (std::size_t i = 0; i < a.instances.size(); ++i) {
        push_gt_box(a.instances[i]);
        lines.push_back(std::to_string(i + 1) + ". " + a.instances[i].distress.canonical_label +
                        " at " + box_str(a.instances[i].box));
      }
      add(0, join(lines, "\n"));
      add(1, "In total, " + std::to_string(a.instances.size()) + " annotated instances are recorded.",
          "\n");
      add(2, "The inventory is ordered as annotated and is suitable for work-order reference.");
      break;
    }
    case TaskId::SpatialRelationshipAnalysis: {
      if (a.instances.size() < 2) {
        const auto& focus = focus_instance(a);
        add(0, "Only a single " + focus.distress.canonical_label +
                   " is recorded on this section, so no pairwise spatial relationships apply.");
        add(1, "Its extent covers " + range_str(focus.box) + ".");
        add(2, "Additional instances would be needed for proximity or overlap analysis.");
      } else {
        const auto order = by_area_desc(a);
        const auto& first = a.instances[order[0]];
        const auto& second = a.instances[order[1]];
        const double dx = second.box.center_x() - first.box.center_x();
        const double dy = second.box.center_y() - first.box.center_y();
        const double dist = std::hypot(dx, dy);
        const double overlap = iou(first.box, second.box);
        const char* heading = std::abs(dx) >= std::abs(dy) ? (dx >= 0 ? "east" : "west")
                                                           : (dy >= 0 ? "south" : "north");
        add(0, "The " + second.distress.canonical_label + " lies to the " + heading + " of the " +
                   first.distress.canonical_label + ", with centers about " +
                   std::to_string(std::llround(dist)) + " pixels apart.");
        add(1, overlap > 0 ? "Their affected areas overlap with an intersection-over-union of " +
                                 format_number(std::round(overlap * 100) / 100) + "."
                           : "Their affected areas do not overlap.");
        add(2, "Separations and headings are computed between annotated box centers.");
      }
      break;
    }
    case TaskId::ReferringExpressionComprehension: {
      const auto& focus = focus_instance(a);
      std::size_t chosen = focus_index(a);
      double best = 1e300;
      for (std::size_t i = 0; i < a.instances.size(); ++i) {
        if (a.instances[i].distress.canonical_label != focus.distress.canonical_label) continue;
        const double d = std::hypot(a.instances[i].box.center_x(), a.instances[i].box.center_y());
        if (d < best) {
          best = d;
          chosen = i;
        }
      }
      push_gt_box(a.instances[chosen]);
      add(0, box_str(a.instances[chosen].box));
      add(1, "This " + focus.distress.canonical_label + " is the closest of its type to the top-left corner.");
      add(2, "Distances are measured from the image origin to annotated box centers.");
      break;
    }
    case TaskId::DenseRegionDescription: {
      const auto& focus = focus_instance(a);
      const std::string sev = focus.severity ? std::string(to_string(*focus.severity)) + "-severity"
                                             : "unrated";
      std::size_t overlapping = 0;
      for (std::size_t i = 0; i < a.instances.size(); ++i)
        if (i != focus_index(a) && iou(focus.box, a.instances[i].box) > 0) ++overlapping;
      add(0, "Region " + range_str(focus.box) + ": " + sev + " " + focus.distress.canonical_label +
                 " recorded in the annotation data.");
      add(1, "The affected area is approximately " + std::to_string(std::llround(focus.box.area())) +
                 " square pixels.");
      add(2, overlapping > 0 ? "The region overlaps " + std::to_string(overlapping) +
                                   " neighboring annotated instance(s)."
                             : "No neighboring annotation overlaps this region.");
      break;
    }
    case TaskId::CountingWithGrounding: {
      const auto& focus = focus_instance(a);
      std::vector<std::string> lines;
      for (const auto& inst : a.instances) {
        if (inst.distress.canonical_label != focus.distress.canonical_label) continue;
        push_gt_box(inst);
        lines.push_back(box_str(inst.box));
      }
      add(0, std::to_string(lines.size()) + " " + focus.distress.canonical_label + " instance" +
                 (lines.size() == 1 ? "" : "s") + ":\n" + join(lines, "\n"));
      add(1, "Each coordinate set is quoted directly from the annotation data.", "\n");
      add(2, "The count covers only the " + focus.distress.canonical_label +
                 " category; other distress types are excluded.");
      break;
    }
    case TaskId::RankingAndSizeAnalysis: {
      const auto order = by_area_desc(a);
      std::vector<std::string> items;
      for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const auto& inst = a.instances[order[rank]];
        items.push_back(std::to_string(rank + 1) + ". " + inst.distress.canonical_label + " at about " +
                        std::to_string(std::llround(inst.box.area())) + " square pixels");
      }
      add(0, "Ranked by affected area: " + join(items, "; ") + ".");
      add(1, "Areas are computed from the annotated box extents.");
      add(2, "Larger affected areas should weigh higher in repair prioritization.");
      break;
    }
    case TaskId::MultiChoiceGrounding: {
      const auto mc = mc_options(a);
      const char letter = static_cast<char>('a' + mc.correct);
      r.gt.choice = letter;
      add(0, std::string("(") + letter + ") " + mc.options[mc.correct] + ".");
      add(1, "The other options do not match the recorded inventory.");
      add(2, "Selection is based on the largest annotated extent.");
      break;
    }
    case TaskId::AttributeGrounding: {
      const auto& focus = focus_instance(a);
      add(0, "The " + focus.distress.canonical_label + " occupies " + range_str(focus.box) + " with " +
                 (focus.severity ? std::string(to_string(*focus.severity)) : "unrated") +
                 " recorded severity.");
      add(1, "Its affected area is approximately " + std::to_string(std::llround(focus.box.area())) +
                 " square pixels, the largest in this view.");
      add(2, "Edge definition and interior texture should be verified on site; the recorded "
             "attributes come from the annotation data.");
      break;
    }
    case TaskId::PciAssessment: {
      const double v = a.pci->value;
      const ConditionLabel band = band_of_pci(v);
      r.gt.pci = v;
      r.gt.answer = format_number(v);
      add(0, "PCI: " + format_number(v) + " (" + std::string(to_string(band)) + ").");
      add(1, "The score places the section in the " + std::string(to_string(band)) +
                 " band on the 0-100 scale.");
      add(2, "First, the recorded index was read from the condition survey. Next, it was checked "
             "against the rating bands. Finally, the " +
                 std::string(to_string(band)) + " categorization follows from the " +
                 std::to_string(pci_range_of(band).lo) + "-" + std::to_string(pci_range_of(band).hi) +
                 " range.");
      break;
    }
    case TaskId::SeverityClassification: {
      const Instance* chosen = nullptr;
      for (const auto& inst : a.instances)
        if (inst.severity && (!chosen || inst.box.area() > chosen->box.area())) chosen = &inst;
      const std::string sev(to_string(*chosen->severity));
      r.gt.answer = "Severity: " + sev;
      r.gt.fields["severity"] = sev;
      add(0, "Severity: " + sev);
      break;
    }
    case TaskId::ConditionClassification: {
      const std::string label(to_string(a.condition->label));
      r.gt.answer = "Condition: " + label;
      r.gt.condition = label;
      add(0, "Condition: " + label);
      break;
    }
    case TaskId::PerformanceAssessment: {
      if (!a.instances.empty()) {
        const auto& focus = focus_instance(a);
        add(0, "The recorded " + focus.distress.canonical_label +
                   " and associated distresses will be felt as roughness and localized impacts "
                   "under traffic.");
      } else if (a.condition || a.pci) {
        const ConditionLabel band = a.condition ? a.condition->label : band_of_pci(a.pci->value);
        const char* impact = band == ConditionLabel::Good ? "minimal functional impact"
                             : band == ConditionLabel::Fair
                                 ? "noticeable but serviceable roughness"
                                 : band == ConditionLabel::Poor ? "significant functional degradation"
                                                                : "severe functional deficiency";
        add(0, "The recorded " + std::string(to_string(band)) + " rating indicates " + impact +
                   " for vehicles using this section.");
      } else {
        add(0, "No distresses are recorded for this section, so functional performance should be "
               "nominal under normal traffic.");
      }
      add(1, "Ride quality degrades fastest where distresses sit in the wheel paths.");
      add(2, "Periodic monitoring will confirm whether functional capacity is deteriorating.");
      break;
    }
    case TaskId::QuickAssessment: {
      const bool urgent = needs_repair(a);
      r.gt.answer = urgent ? "Yes - immediate repair is recommended."
                           : "No - routine monitoring is sufficient.";
      add(0, *r.gt.answer);
      break;
    }
    case TaskId::DetailedEngineeringAnalysis: {
      const auto& focus = focus_instance(a);
      const std::string& cls = focus.distress.canonical_label;
      const char* mechanism =
          cls == "alligator crack" ? "fatigue-related structural deterioration"
          : cls == "pothole" ? "localized structural failure"
          : cls == "block crack" ? "aging, shrinkage-prone surfacing"
          : cls == "rut" ? "plastic deformation in the wheel paths"
          : cls.find("crack") != std::string::npos ? "thermal and shrinkage cracking"
                                                   : "surface-level deterioration";
      add(0, "The section records " + content_phrase(a) + ", a pattern consistent with " + mechanism +
                 ".");
      add(1, "Interaction between adjacent instances can accelerate moisture intrusion and "
             "secondary cracking.");
      add(2, "Structural adequacy should be confirmed before selecting between surface treatment "
             "and deeper rehabilitation.");
      break;
    }
    case TaskId::DistressIdentification: {
      const auto& focus = focus_instance(a);
      r.gt.answer = "Distress: " + focus.distress.canonical_label;
      r.gt.fields["distress"] = focus.distress.canonical_label;
      add(0, "Distress: " + focus.distress.canonical_label);
      break;
    }
    case TaskId::InfrastructureAnalysis: {
      std::vector<std::string> infra;
      for (const auto& cls : distinct_classes(a))
        if (cls == "patch" || cls == "manhole" || cls == "repair") infra.push_back(cls);
      if (!infra.empty())
        add(0, "Recorded infrastructure elements: " + join(infra, ", ") +
                   ". Their integration with the surrounding surface should be checked for "
                   "settlement and edge deterioration.");
      else
        add(0, "No fixed infrastructure elements are recorded for this section; the assessment "
               "covers the pavement surface itself.");
      add(1, "Asset records should link each element to its maintenance history.");
      add(2, "Elements performing poorly against the adjacent surface warrant inclusion in the "
             "next work program.");
      break;
    }
    case TaskId::TreatmentRecommendation: {
      const auto& focus = focus_instance(a);
      const std::string treatment = treatment_for(focus.distress.canonical_label);
      r.gt.fields["repair"] = treatment;
      add(0, "The recommended primary action for the " + focus.distress.canonical_label + " is " +
                 treatment + ".\nRepair: " + treatment);
      add(1, "Secondary distresses should be addressed in the same mobilization where practical.",
          "\n");
      add(2, "Treatment selection follows the distress type and its recorded severity.");
      break;
    }
    case TaskId::SafetyAnalysis: {
      bool pothole = false;
      for (const auto& inst : a.instances)
        if (inst.distress.canonical_label == "pothole") pothole = true;
      add(0, pothole ? "The recorded pothole(s) present a tire and rim damage risk and can force "
                       "evasive maneuvers."
                     : "The recorded conditions present limited immediate hazard, but surface "
                       "irregularities can still affect braking and drainage.");
      add(1, "Risk rises in wet weather and at night when surface defects are harder to see.");
      add(2, "If deterioration progresses before repair, interim signage or speed advisories "
             "should be considered.");
      break;
    }
    case TaskId::FieldPracticalAssessment: {
      add(0, "Rapid assessment: this section shows " + content_phrase(a) +
                 ", which a field crew can verify in a single pass.");
      add(1, "Priority checks: confirm extents against the annotation data and note any new "
             "defects not yet recorded.");
      add(2, "Remaining judgments, such as subsurface condition, require coring or deflection "
             "testing beyond a visual pass.");
      break;
    }
    case TaskId::ChecklistFilling: {
      const auto classes = distinct_classes(a);
      const auto sev = dominant_severity(a);
      std::vector<std::string> lines = {
          "- section: " + a.image_ref,
          "- distress types: " + (classes.empty() ? "none recorded" : join(classes, ", ")),
          "- instance count: " + std::to_string(a.instances.size()),
          "- dominant severity: " + (sev ? std::string(to_string(*sev)) : "unrated"),
          "- condition category: " +
              (a.condition ? std::string(to_string(a.condition->label)) : "unrated"),
          "- condition index: " + (a.pci ? format_number(a.pci->value) : "not recorded"),
          "- recommended action: " + (a.instances.empty()
                                          ? "routine monitoring"
                                          : treatment_for(focus_instance(a).distress.canonical_label)),
      };
      add(0, join(lines, "\n"));
      add(1, "- notes: all entries derive from the recorded annotation data", "\n");
      add(2, "- follow-up: verify field conditions at the next scheduled inspection", "\n");
      break;
    }
    case TaskId::MaintenanceDecision: {
      const bool urgent = needs_repair(a);
      add(0, urgent ? "Schedule this section for repair in the current program cycle; the recorded "
                      "conditions justify priority treatment."
                    : "Defer this section to routine-cycle maintenance; the recorded conditions do "
                      "not justify immediate intervention.");
      add(1, "Budget allocation should weigh affected area, severity, and traffic exposure.");
      add(2, "Revisit the decision if the next inspection shows measurable progression.");
      break;
    }
    case TaskId::ChainOfThought:
    case TaskId::StepByStepReasoning: {
      std::string s1 = "Step 1: The annotation records " + content_phrase(a) + ".";
      std::string s2, s3, conclusion;
      if (!a.instances.empty()) {
        const auto& focus = focus_instance(a);
        s2 = "Step 2: The dominant instance is the " + focus.distress.canonical_label +
             " covering about " + std::to_string(std::llround(focus.box.area())) + " square pixels" +
             (focus.severity ? " at " + std::string(to_string(*focus.severity)) + " severity" : "") +
             ".";
        s3 = "Step 3: The extent and distribution indicate " +
             std::string(needs_repair(a) ? "conditions that warrant near-term treatment"
                                         : "conditions manageable under routine maintenance") +
             ".";
        conclusion = "Conclusion: " +
                     std::string(needs_repair(a) ? "prioritize this section for repair."
                                                 : "keep this section on the routine schedule.");
      } else if (a.pci) {
        const ConditionLabel band = band_of_pci(a.pci->value);
        s2 = "Step 2: The recorded index of " + format_number(a.pci->value) +
             " falls in the " + std::string(to_string(band)) + " band.";
        s3 = "Step 3: That band corresponds to the " + std::to_string(pci_range_of(band).lo) + "-" +
             std::to_string(pci_range_of(band).hi) + " range of the 0-100 scale.";
        conclusion = "Conclusion: treat the section as " + std::string(to_string(band)) + ".";
      } else {
        const std::string label(a.condition ? to_string(a.condition->label) : "unrated");
        s2 = "Step 2: The section carries a " + label + " condition category.";
        s3 = "Step 3: No instance-level annotations modify that rating.";
        conclusion = "Conclusion: the " + label + " rating stands.";
      }
      add(0, s1 + " " + s2 + " " + s3 + " " + conclusion);
      add(1, "Each step cites only recorded data; no unverifiable visual claims are made.");
      add(2, "This chain mirrors the standard survey routine from observation to decision.");
      break;
    }
    case TaskId::ComplexEngineeringReasoning: {
      const auto& focus = focus_instance(a);
      add(0, "Step 1: Identify the dominant distress, a " + focus.distress.canonical_label +
                 ". Step 2: Relate it to loading, since repeated wheel loads concentrate stress at "
                 "existing discontinuities. Step 3: Add environmental cycling, which drives crack "
                 "growth and moisture intrusion. Conclusion: load and environment acting together "
                 "best explain the recorded pattern.");
      add(1, "Material aging lowers the fracture resistance and accelerates both mechanisms.");
      add(2, "Verification would require coring and traffic data beyond the recorded annotations.");
      break;
    }
    case TaskId::ComparativeAnalysis: {
      const auto order = by_area_desc(a);
      const auto& first = a.instances[order[0]];
      if (order.size() < 2) {
        add(0, "Only the " + first.distress.canonical_label +
                   " is recorded, so the comparison reduces to a single instance of about " +
                   std::to_string(std::llround(first.box.area())) + " square pixels.");
      } else {
        const auto& second = a.instances[order[1]];
        add(0, "The " + first.distress.canonical_label + " affects about " +
                   std::to_string(std::llround(first.box.area())) + " square pixels versus " +
                   std::to_string(std::llround(second.box.area())) + " for the " +
                   second.distress.canonical_label + ", making the former the larger concern.");
      }
      add(1, "Severity ratings, where recorded, refine this area-based ordering.");
      add(2, "Repair sequencing should start with the instance posing the greater progression "
             "risk.");
      break;
    }
    case TaskId::CorrectiveReasoning: {
      const auto& focus = focus_instance(a);
      const std::string claim = corrective_claim(a);
      std::string correction;
      if (focus.severity)
        correction = "the recorded severity is " + std::string(to_string(*focus.severity));
      else
        correction = "the recorded class is " + focus.distress.canonical_label;
      add(0, "Step 1: The note states: " + claim + " Step 2: The annotation data disagree; " +
                 correction + ". Conclusion: correct the note to match the recorded annotation.");
      add(1, "Misclassifications of this kind propagate into wrong treatment selections.");
      add(2, "A second reviewer should confirm the corrected entry before it enters the register.");
      break;
    }
    case TaskId::CounterfactualAnalysis: {
      const auto& focus = focus_instance(a);
      const std::string& cls = focus.distress.canonical_label;
      const char* progression =
          cls == "pothole" ? "deepen and widen under traffic, raising vehicle damage risk sharply"
          : cls == "alligator crack"
              ? "interconnect further and break into loose blocks, inviting potholes"
          : cls == "rut" ? "deepen and channel water along the wheel paths"
                         : "lengthen and widen while admitting moisture to the base";
      add(0, "If the " + cls + " were left untreated, it would likely " + progression + ".");
      add(1, "Deferred treatment typically converts a surface repair into a structural one.");
      add(2, "Two seasons of freeze-thaw or heavy loading would materially expand the affected "
             "area and the eventual repair cost.");
      break;
    }
    case TaskId::MultiLengthCaption:
    case TaskId::SceneSummarization: {
      add(0, "A pavement section with " + content_phrase(a) + ".");
      if (!a.instances.empty()) {
        const auto classes = distinct_classes(a);
        add(1, "Recorded distress types: " + join(classes, ", ") + ".");
        const auto sev = dominant_severity(a);
        add(2, std::string("The dominant instance sits in the ") +
                   sector_phrase(focus_instance(a).box, a.dims) + " region" +
                   (sev ? " at " + std::string(to_string(*sev)) + " severity" : "") + ".");
      } else {
        add(1, "No instance-level annotations are recorded for this image.");
        add(2, "The rating applies to the section as a whole.");
      }
      break;
    }
    case TaskId::MultiImageComparison: {
      if (partner == nullptr)
        raise(Errc::IncompatibleAnnotation, "multi_image_comparison needs a second annotation");
      const UnifiedAnnotation& b = *partner;
      add(0, "Section one shows " + content_phrase(a) + "; section two shows " + content_phrase(b) +
                 ".");
      const bool a_worse = needs_repair(a) && !needs_repair(b);
      const bool b_worse = needs_repair(b) && !needs_repair(a);
      add(1, a_worse   ? "Section one presents the more pressing conditions."
             : b_worse ? "Section two presents the more pressing conditions."
                       : "Both sections present comparable urgency based on the recorded data.");
      add(2, "A joint work order covering both sections would minimize mobilization cost.");
      break;
    }
    case TaskId::MultiTurnConsultation: {
      // built by build_multiturn; single-turn fallback is a scene summary
      add(0, "Consultation opening: this section shows " + content_phrase(a) + ".");
      add(1, "Further questions can cover priority, treatment, and scheduling.");
      add(2, "All answers will cite the recorded annotation data.");
      break;
    }
  }

  if (!r.gt.answer && (answer_format_of(task) == AnswerFormat::ShortAnswer ||
                       answer_format_of(task) == AnswerFormat::MultipleChoice))
    r.gt.answer = r.text;
  return r;
}

// Instruction text for (annotation, task, length): template skeleton plus
// task-dependent additions (options, claims).
inline std::string render_instruction(const UnifiedAnnotation& a, TaskId task, LengthVariant length,
                                      const UnifiedAnnotation* partner = nullptr) {
  using namespace detail;
  SlotValues slots;
  if (!a.instances.empty()) {
    const auto& focus = focus_instance(a);
    std::size_t count = 0;
    for (const auto& inst : a.instances)
      if (inst.distress.canonical_label == focus.distress.canonical_label) ++count;
    slots.set("class", focus.distress.canonical_label)
        .set("box", box_str(focus.box))
        .set("count", std::to_string(count));
    if (focus.severity) slots.set("severity", std::string(to_string(*focus.severity)));
  }
  if (a.pci) slots.set("pci", format_number(a.pci->value));

  std::string text = fill_slots(instruction_skeleton(task, length), slots);

  if (task == TaskId::MultiChoiceGrounding) {
    const auto mc = mc_options(a);
    for (std::size_t i = 0; i < mc.options.size(); ++i)
      text += std::string("\n(") + static_cast<char>('a' + i) + ") " + mc.options[i];
  } else if (task == TaskId::CorrectiveReasoning) {
    text += "\n" + corrective_claim(a);
  } else if (task == TaskId::MultiImageComparison && partner) {
    text += "\nSection one: first image. Section two: second image.";
  }
  return text;
}

// Text form of the annotation handed to a generation provider.
inline std::string scene_serialization(const UnifiedAnnotation& a) {
  std::string out = "Image: " + a.image_ref + " (" + std::to_string(a.dims.width) + "x" +
                    std::to_string(a.dims.height) + ")\n";
  for (const auto& inst : a.instances)
    out += inst.distress.canonical_label + ", " +
           (inst.severity ? std::string(to_string(*inst.severity)) : "unrated") + ", " +
           detail::box_str(inst.box) + "\n";
  if (a.pci) out += "PCI: " + detail::format_number(a.pci->value) + "\n";
  if (a.condition) out += "Condition: " + std::string(to_string(a.condition->label)) + "\n";
  return out;
}

inline void ensure_supports(const UnifiedAnnotation& a, TaskId task) {
  if (!annotation_supports(a, task))
    raise(Errc::IncompatibleAnnotation, std::string(to_string(task)) + " needs data missing from " +
                                            a.image_ref);
}

// One instruction-response record. Template mode (no provider) fills the gold
// answer deterministically; provider mode sends the composed prompt plus the
// scene serialization and uses the reply as the response.
inline InstructionRecord generate_record(const UnifiedAnnotation& annotation, TaskId task,
                                         LengthVariant length, const PromptSpec& prompt,
                                         Provider* provider = nullptr,
                                         const UnifiedAnnotation* partner = nullptr) {
  ensure_supports(annotation, task);
  if (task == TaskId::MultiImageComparison && partner == nullptr)
    raise(Errc::IncompatibleAnnotation, "multi_image_comparison needs a second annotation");

  const Rendered gold = render_answer(annotation, task, length, partner);
  const std::string instruction = render_instruction(annotation, task, length, partner);

  std::string response = gold.text;
  if (provider != nullptr) {
    ProviderRequest req;
    req.system_prompt = prompt.text();
    req.user_prompt = scene_serialization(annotation);
    if (partner) req.user_prompt += "Second image:\n" + scene_serialization(*partner);
    req.user_prompt += "\nINSTRUCTION:\n" + instruction + "\n\n" +
                       std::string(kReferenceAnswerMarker) + "\n" + gold.text;
    response = complete_with_retries(*provider, req).text;
  }

  InstructionRecord rec;
  rec.image_refs.push_back(annotation.image_ref);
  if (partner) rec.image_refs.push_back(partner->image_ref);
  rec.task = task;
  rec.length = length;
  rec.answer_format = answer_format_of(task);
  rec.source_dataset = annotation.source_dataset;
  rec.turns = {{Role::User, instruction}, {Role::Assistant, response}};
  rec.ground_truth = gold.gt;
  rec.record_id = compute_record_id(rec);
  return rec;
}

struct LengthVariantsResult {
  std::vector<InstructionRecord> records;
  std::vector<std::pair<LengthVariant, std::string>> failures;
};

// One record per length variant; a provider failure on one variant does not
// discard the others.
inline LengthVariantsResult length_variants(const UnifiedAnnotation& annotation, TaskId task,
                                            const PromptSpec& prompt, Provider* provider = nullptr) {
  ensure_supports(annotation, task);
  LengthVariantsResult out;
  for (auto variant : kAllLengthVariants) {
    try {
      out.records.push_back(generate_record(annotation, task, variant, prompt, provider));
    } catch (const Error& e) {
      if (e.code() != Errc::ProviderError) throw;
      out.failures.emplace_back(variant, e.what());
    }
  }
  return out;
}

namespace detail {

struct TurnPair {
  std::string question;
  std::string answer;
};

inline TurnPair consultation_focus_turn(const UnifiedAnnotation& a, AnswerFormat focus) {
  switch (focus) {
    case AnswerFormat::Coordinates: {
      std::vector<std::string> lines;
      for (std::size_t i = 0; i < a.instances.size(); ++i)
        lines.push_back(std::to_string(i + 1) + ". " + a.instances[i].distress.canonical_label +
                        " at " + box_str(a.instances[i].box));
      return {"Which distresses are present, and where exactly? Provide bounding boxes.",
              join(lines, "\n")};
    }
    case AnswerFormat::Numeric: {
      const ConditionLabel band = band_of_pci(a.pci->value);
      return {"What is the PCI of this section?",
              "PCI: " + format_number(a.pci->value) + " (" + std::string(to_string(band)) + ")."};
    }
    case AnswerFormat::MultipleChoice: {
      const auto mc = mc_options(a);
      std::string q = "Which option names the largest distress?";
      for (std::size_t i = 0; i < mc.options.size(); ++i)
        q += std::string("\n(") + static_cast<char>('a' + i) + ") " + mc.options[i];
      const char letter = static_cast<char>('a' + mc.correct);
      return {q, std::string("(") + letter + ") " + mc.options[mc.correct] + "."};
    }
    case AnswerFormat::Checklist: {
      const Rendered r = render_answer(a, TaskId::ChecklistFilling, LengthVariant::Short);
      return {"Complete the survey checklist for this section.", r.text};
    }
    case AnswerFormat::ChainOfThought: {
      const Rendered r = render_answer(a, TaskId::ChainOfThought, LengthVariant::Short);
      return {"Walk me through your assessment step by step.", r.text};
    }
    default:
      return {"What distresses or conditions are recorded for this section?",
              "This section shows " + content_phrase(a) + "."};
  }
}

inline TurnPair consultation_followup(const UnifiedAnnotation& a, int turn) {
  const bool has_instances = !a.instances.empty();
  const std::string cls = has_instances ? focus_instance(a).distress.canonical_label : "";
  switch (turn) {
    case 2:
      return {"Which issue requires priority attention?",
              has_instances
                  ? "The " + cls + " requires priority attention given its recorded extent."
                  : "No instance-level distress is recorded; attention follows the overall "
                    "condition rating."};
    case 3:
      return {"What treatment strategy do you recommend?",
              has_instances ? "Recommended treatment: " + treatment_for(cls) + "."
                            : "No instance-level repairs are indicated; continue routine surface "
                              "maintenance."};
    case 4:
      return {"What is the implementation timeline?",
              "Schedule the work within the next maintenance cycle and monitor the section until "
              "then."};
    case 5:
      return {"What are the main cost considerations?",
              "Costs scale with affected area and traffic control needs; early treatment is "
              "cheaper than deferred reconstruction."};
    case 6:
      return {"How should the repair be verified afterward?",
              "Re-inspect after completion, confirm surface integrity, and log the repair in the "
              "asset register."};
    case 7:
      return {"Are interim safety measures needed?",
              needs_repair(a)
                  ? "Mark the affected area and advise reduced speeds until the repair is done."
                  : "No interim measures are needed; routine signage is sufficient."};
    default:
      return {"Summarize this consultation for the report.",
              "Summary: the section shows " + content_phrase(a) +
                  "; actions and scheduling follow the recommendations above."};
  }
}

}  // namespace detail

// Progressive consultation of turn_count user/assistant exchanges. The first
// exchange carries the record's answer-format content; later turns deepen
// from priority to treatment to scheduling.
inline InstructionRecord build_multiturn(const UnifiedAnnotation& annotation, int turn_count,
                                         const std::vector<PromptSpec>& prompts,
                                         Provider* provider = nullptr,
                                         AnswerFormat focus = AnswerFormat::Descriptive) {
  if (turn_count < 2 || turn_count > 8)
    raise(Errc::TurnCountOutOfRange, "turn count " + std::to_string(turn_count) + " outside [2,8]");
  if (prompts.empty()) raise(Errc::InvalidArgument, "at least one per-turn prompt is required");
  if (focus == AnswerFormat::Coordinates || focus == AnswerFormat::MultipleChoice)
    if (annotation.instances.empty())
      raise(Errc::IncompatibleAnnotation, "focus format needs instances on " + annotation.image_ref);
  if (focus == AnswerFormat::Numeric && !annotation.pci)
    raise(Errc::IncompatibleAnnotation, "numeric focus needs a PCI value on " + annotation.image_ref);

  InstructionRecord rec;
  rec.image_refs.push_back(annotation.image_ref);
  rec.task = TaskId::MultiTurnConsultation;
  rec.length = LengthVariant::Medium;
  rec.answer_format = focus;
  rec.source_dataset = annotation.source_dataset;
  if (annotation.dims.width > 0) rec.ground_truth.dims = annotation.dims;

  const std::string scene = scene_serialization(annotation);
  std::string transcript;
  for (int t = 1; t <= turn_count; ++t) {
    detail::TurnPair pair = t == 1 ? detail::consultation_focus_turn(annotation, focus)
                                   : detail::consultation_followup(annotation, t);
    std::string answer = pair.answer;
    if (provider != nullptr) {
      const PromptSpec& prompt = prompts[std::min<std::size_t>(t - 1, prompts.size() - 1)];
      ProviderRequest req;
      req.system_prompt = prompt.text();
      req.user_prompt = scene;
      if (!transcript.empty()) req.user_prompt += "\nCONVERSATION SO FAR:\n" + transcript;
      req.user_prompt += "\nINSTRUCTION:\n" + pair.question + "\n\n" +
                         std::string(kReferenceAnswerMarker) + "\n" + pair.answer;
      answer = complete_with_retries(*provider, req).text;
    }
    rec.turns.push_back({Role::User, pair.question});
    rec.turns.push_back({Role::Assistant, answer});
    transcript += "User: " + pair.question + "\nAssistant: " + answer + "\n";

    if (t == 1) {
      const Rendered gold = [&] {
        Rendered r;
        switch (focus) {
          case AnswerFormat::Coordinates:
            for (const auto& inst : annotation.instances)
              r.gt.boxes.push_back(
                  {inst.distress.canonical_label, detail::box_int(inst.box), inst.severity});
            break;
          case AnswerFormat::Numeric: r.gt.pci = annotation.pci->value; break;
          case AnswerFormat::MultipleChoice:
            r.gt.choice = static_cast<char>('a' + detail::choice_slot(annotation));
            break;
          default: break;
        }
        return r;
      }();
      rec.ground_truth.boxes = gold.gt.boxes;
      rec.ground_truth.pci = gold.gt.pci;
      rec.ground_truth.choice = gold.gt.choice;
      rec.ground_truth.answer = pair.answer;
    }
  }

  rec.record_id = compute_record_id(rec);
  return rec;
}

}  // namespace pavekit::genkit
