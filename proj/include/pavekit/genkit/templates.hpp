#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pavekit/core/types.hpp"
#include "pavekit/error.hpp"

namespace pavekit::genkit {

enum class FamilyName { Captioning, ChainOfThought, Grounding, PciSpecific, Corrective, MultiTurn };

inline std::string_view to_string(FamilyName f) {
  switch (f) {
    case FamilyName::Captioning: return "captioning";
    case FamilyName::ChainOfThought: return "chain_of_thought";
    case FamilyName::Grounding: return "grounding";
    case FamilyName::PciSpecific: return "pci_specific";
    case FamilyName::Corrective: return "corrective";
    case FamilyName::MultiTurn: return "multi_turn";
  }
  return "?";
}

inline FamilyName family_of(TaskId task) {
  switch (task) {
    case TaskId::SingleObjectGrounding:
    case TaskId::MultiObjectEnumeration:
    case TaskId::SpatialRelationshipAnalysis:
    case TaskId::ReferringExpressionComprehension:
    case TaskId::DenseRegionDescription:
    case TaskId::CountingWithGrounding:
    case TaskId::RankingAndSizeAnalysis:
    case TaskId::MultiChoiceGrounding:
    case TaskId::AttributeGrounding: return FamilyName::Grounding;
    case TaskId::PciAssessment:
    case TaskId::ConditionClassification:
    case TaskId::PerformanceAssessment:
    case TaskId::QuickAssessment:
    case TaskId::InfrastructureAnalysis:
    case TaskId::TreatmentRecommendation:
    case TaskId::SafetyAnalysis:
    case TaskId::FieldPracticalAssessment:
    case TaskId::ChecklistFilling:
    case TaskId::MaintenanceDecision: return FamilyName::PciSpecific;
    case TaskId::SeverityClassification:
    case TaskId::DetailedEngineeringAnalysis:
    case TaskId::ChainOfThought:
    case TaskId::ComplexEngineeringReasoning:
    case TaskId::ComparativeAnalysis:
    case TaskId::StepByStepReasoning:
    case TaskId::CounterfactualAnalysis: return FamilyName::ChainOfThought;
    case TaskId::CorrectiveReasoning: return FamilyName::Corrective;
    case TaskId::MultiLengthCaption:
    case TaskId::DistressIdentification:
    case TaskId::MultiImageComparison:
    case TaskId::SceneSummarization: return FamilyName::Captioning;
    case TaskId::MultiTurnConsultation: return FamilyName::MultiTurn;
  }
  return FamilyName::Captioning;
}

// What a task needs from its annotation before a record can be generated.
enum class Requirement { Any, Instances, SeverityInstances, Pci, Condition };

inline Requirement requirement_of(TaskId task) {
  switch (task) {
    case TaskId::SingleObjectGrounding:
    case TaskId::MultiObjectEnumeration:
    case TaskId::SpatialRelationshipAnalysis:
    case TaskId::ReferringExpressionComprehension:
    case TaskId::DenseRegionDescription:
    case TaskId::CountingWithGrounding:
    case TaskId::RankingAndSizeAnalysis:
    case TaskId::MultiChoiceGrounding:
    case TaskId::AttributeGrounding:
    case TaskId::DetailedEngineeringAnalysis:
    case TaskId::DistressIdentification:
    case TaskId::TreatmentRecommendation:
    case TaskId::ComplexEngineeringReasoning:
    case TaskId::ComparativeAnalysis:
    case TaskId::CorrectiveReasoning:
    case TaskId::CounterfactualAnalysis: return Requirement::Instances;
    case TaskId::SeverityClassification: return Requirement::SeverityInstances;
    case TaskId::PciAssessment: return Requirement::Pci;
    case TaskId::ConditionClassification: return Requirement::Condition;
    default: return Requirement::Any;
  }
}

inline bool annotation_supports(const UnifiedAnnotation& annotation, TaskId task) {
  switch (requirement_of(task)) {
    case Requirement::Instances: return !annotation.instances.empty();
    case Requirement::SeverityInstances:
      for (const auto& inst : annotation.instances)
        if (inst.severity) return true;
      return false;
    case Requirement::Pci: return annotation.pci.has_value();
    case Requirement::Condition: return annotation.condition.has_value();
    case Requirement::Any: return true;
  }
  return false;
}

struct SlotValues {
  std::map<std::string, std::string, std::less<>> values;

  SlotValues& set(std::string_view key, std::string value) {
    values[std::string(key)] = std::move(value);
    return *this;
  }
};

inline const std::set<std::string, std::less<>>& known_slots() {
  static const std::set<std::string, std::less<>> slots = {"class", "box", "severity", "pci", "count"};
  return slots;
}

// Replaces {class}/{box}/{severity}/{pci}/{count}; any other placeholder is
// a template-load error.
inline std::string fill_slots(std::string_view skeleton, const SlotValues& slots) {
  std::string out;
  out.reserve(skeleton.size());
  std::size_t i = 0;
  while (i < skeleton.size()) {
    if (skeleton[i] != '{') {
      out += skeleton[i++];
      continue;
    }
    const std::size_t close = skeleton.find('}', i);
    if (close == std::string_view::npos)
      raise(Errc::TemplateError, "unterminated placeholder in template");
    const std::string_view name = skeleton.substr(i + 1, close - i - 1);
    if (!known_slots().count(name))
      raise(Errc::TemplateError, "unknown placeholder {" + std::string(name) + "}");
    const auto it = slots.values.find(name);
    if (it == slots.values.end())
      raise(Errc::TemplateError, "no value supplied for {" + std::string(name) + "}");
    out += it->second;
    i = close + 1;
  }
  return out;
}

struct InstructionTemplate {
  TaskId task;
  LengthVariant length;
  std::string_view skeleton;
};

struct TemplateFamily {
  FamilyName name;
  std::vector<InstructionTemplate> templates;
};

namespace detail {

// one entry per task: short / medium / long instruction skeletons
struct TaskSkeletons {
  TaskId task;
  std::array<std::string_view, 3> variants;
};

inline const std::vector<TaskSkeletons>& instruction_skeletons() {
  static const std::vector<TaskSkeletons> all = {
      {TaskId::SingleObjectGrounding,
       {"Locate the {class} and return its bounding box.",
        "Identify the {class} on the pavement surface and provide its exact bounding box as "
        "[x1, y1, x2, y2].",
        "Survey the pavement image for the most prominent {class}. Report its precise location as "
        "a [x1, y1, x2, y2] bounding box in pixel coordinates, suitable for an inspection record."}},
      {TaskId::MultiObjectEnumeration,
       {"List every distress instance with its coordinates.",
        "Enumerate all annotated distress instances in this image, giving each one's class and "
        "[x1, y1, x2, y2] bounding box.",
        "Produce a complete inventory of the annotated distress instances in this pavement image. "
        "For each instance give its distress class and exact [x1, y1, x2, y2] bounding box so the "
        "inventory can back a maintenance work order."}},
      {TaskId::SpatialRelationshipAnalysis,
       {"Describe the spatial arrangement of the distresses.",
        "Describe how the annotated distresses are positioned relative to one another on the "
        "pavement surface.",
        "Analyze the geometric relationships between the annotated distresses: relative compass "
        "directions, center-to-center separations, and any overlap between affected areas."}},
      {TaskId::ReferringExpressionComprehension,
       {"Find the {class} closest to the top-left corner.",
        "Locate the {class} nearest the top-left corner of the image and give its bounding box.",
        "Within this pavement scene, resolve the referring expression 'the {class} nearest the "
        "top-left corner' and return the matching instance's [x1, y1, x2, y2] bounding box."}},
      {TaskId::DenseRegionDescription,
       {"Describe the region around the largest distress.",
        "Give a spatially referenced description of the region covered by the largest annotated "
        "distress.",
        "Provide a dense region description for the largest annotated distress: its extent "
        "expressed as coordinate ranges, its class, and its recorded severity where available."}},
      {TaskId::CountingWithGrounding,
       {"How many {class} instances are there? Give coordinates.",
        "Count the {class} instances in this image and list each one's bounding box.",
        "Perform a verified count of the {class} instances on this pavement section, listing every "
        "instance's [x1, y1, x2, y2] bounding box so the count can be audited."}},
      {TaskId::RankingAndSizeAnalysis,
       {"Rank the distresses by affected area.",
        "Rank the annotated distresses from largest to smallest affected area.",
        "Order the annotated distresses by the pavement area they affect, from largest to "
        "smallest, and note the approximate size of each to support repair prioritization."}},
      {TaskId::MultiChoiceGrounding,
       {"Which option names the largest distress?",
        "Select the option that correctly identifies the largest annotated distress.",
        "Considering the annotated distress inventory, select the option that correctly identifies "
        "the largest distress and its position."}},
      {TaskId::AttributeGrounding,
       {"Assess the surface attributes of the {class}.",
        "Describe the visible attributes of the {class}, including extent and recorded severity.",
        "Provide an attribute-level assessment of the {class}: affected extent, recorded severity "
        "where available, and its position within the section."}},
      {TaskId::PciAssessment,
       {"Estimate the PCI for this section.",
        "Estimate the Pavement Condition Index for this section on the 0-100 scale.",
        "Following ASTM D6433 practice, estimate the Pavement Condition Index for this section on "
        "the 0-100 scale and justify the rating."}},
      {TaskId::SeverityClassification,
       {"Classify the severity of the {class}.",
        "Classify the severity of the {class} as Low, Medium, or High.",
        "Using ASTM D6433 severity definitions, classify the {class} as Low, Medium, or High "
        "severity and justify the rating step by step."}},
      {TaskId::ConditionClassification,
       {"Classify the overall pavement condition.",
        "Assign this pavement section an overall condition category.",
        "Assign this pavement section an overall condition category (Good, Fair, Poor, or Failed) "
        "consistent with its condition rating."}},
      {TaskId::PerformanceAssessment,
       {"Assess how the surface condition affects performance.",
        "Assess how the recorded surface condition affects ride quality and vehicle operations.",
        "Evaluate the functional performance of this pavement section: how the recorded distresses "
        "or condition rating affect ride quality, vehicle operations, and expected deterioration."}},
      {TaskId::QuickAssessment,
       {"Immediate repair needed?",
        "Immediate repair needed? Answer yes or no.",
        "For field triage: is immediate repair needed on this section? Answer yes or no."}},
      {TaskId::DetailedEngineeringAnalysis,
       {"Analyze the recorded distress pattern.",
        "Provide an engineering analysis of the recorded distress pattern and its likely "
        "mechanisms.",
        "Provide a detailed engineering analysis of this section: distress pattern, likely failure "
        "mechanisms, interaction effects, and implications for structural integrity."}},
      {TaskId::DistressIdentification,
       {"Identify the primary distress type.",
        "Identify the primary distress type using standard terminology.",
        "Identify the primary distress type visible on this section using ASTM-consistent "
        "terminology."}},
      {TaskId::InfrastructureAnalysis,
       {"Evaluate the infrastructure elements in this section.",
        "Evaluate the condition and role of infrastructure elements recorded in this section.",
        "Evaluate the infrastructure elements recorded for this section, their condition, their "
        "interaction with the surrounding pavement, and the asset-management implications."}},
      {TaskId::TreatmentRecommendation,
       {"Recommend a repair treatment.",
        "Recommend an appropriate repair treatment for the recorded distresses.",
        "Recommend repair treatments for the recorded distresses, matching each treatment to the "
        "distress type and severity, and state the primary recommended action."}},
      {TaskId::SafetyAnalysis,
       {"Assess the safety impact of this section.",
        "Assess the safety risks this section poses to vehicles and road users.",
        "Assess the safety implications of the recorded conditions: vehicle damage risk, traction "
        "and drainage concerns, and any need for interim traffic control."}},
      {TaskId::FieldPracticalAssessment,
       {"Give a rapid field assessment.",
        "Give a practical field assessment of this section under time constraints.",
        "Simulate an on-site inspection under practical constraints: summarize what a field crew "
        "should verify first and what can be assessed from the recorded data alone."}},
      {TaskId::ChecklistFilling,
       {"Complete the survey checklist.",
        "Complete the condition survey checklist for this section.",
        "Complete the standardized condition survey checklist for this section, filling every "
        "field supported by the recorded data."}},
      {TaskId::MaintenanceDecision,
       {"Should this section be scheduled for maintenance?",
        "Decide whether this section should enter the maintenance program this cycle.",
        "Make a maintenance programming decision for this section: whether to schedule work this "
        "cycle, at what priority, and the main deciding factors."}},
      {TaskId::ChainOfThought,
       {"Walk through your assessment step by step.",
        "Walk through your assessment of this section step by step, from observation to "
        "conclusion.",
        "Demonstrate your full assessment methodology for this section step by step: initial "
        "observation, distress interpretation, severity considerations, and final conclusion."}},
      {TaskId::ComplexEngineeringReasoning,
       {"Explain the likely causes of this distress pattern.",
        "Reason through how loading and environment produced the recorded distress pattern.",
        "Reason through the interaction of traffic loading, environmental cycles, and material "
        "aging that best explains the recorded distress pattern, step by step."}},
      {TaskId::ComparativeAnalysis,
       {"Compare the two most significant distresses.",
        "Compare the two most significant distresses and their repair urgency.",
        "Compare the two most significant recorded distresses: extent, severity, progression "
        "risk, and which should be repaired first."}},
      {TaskId::CorrectiveReasoning,
       {"Check this field note for errors.",
        "Review the following field note and correct any misclassification.",
        "Review the following field note against the recorded annotation data, identify any "
        "misclassification, and explain the correction."}},
      {TaskId::StepByStepReasoning,
       {"Show the systematic evaluation procedure for this section.",
        "Show the systematic evaluation procedure for this section with explicit steps.",
        "Show the systematic evaluation procedure for this section with explicit, numbered steps "
        "and a justified decision at each stage."}},
      {TaskId::CounterfactualAnalysis,
       {"What if the {class} were left untreated?",
        "What would happen if the {class} were left untreated through the next season?",
        "Analyze the counterfactual: if the {class} were left untreated for two years, how would "
        "the distress progress and what would the consequences be for this section?"}},
      {TaskId::MultiLengthCaption,
       {"Give a brief field note for this image.",
        "Write a field caption summarizing this pavement image.",
        "Write a detailed inspection caption for this pavement image covering every recorded "
        "distress and the overall condition."}},
      {TaskId::MultiTurnConsultation,
       {"Begin a consultation about this pavement section.",
        "Begin a professional consultation about this pavement section.",
        "Begin an in-depth professional consultation about this pavement section."}},
      {TaskId::MultiImageComparison,
       {"Compare these two pavement sections.",
        "Compare the condition of these two pavement sections.",
        "Compare these two pavement sections: distress makeup, overall condition, and which "
        "requires attention first."}},
      {TaskId::SceneSummarization,
       {"Summarize the overall condition of this section.",
        "Summarize the overall condition of this section for a maintenance planner.",
        "Provide an executive summary of this section's condition: dominant distresses, overall "
        "rating, and critical maintenance needs."}},
  };
  return all;
}

inline void validate_skeleton(std::string_view skeleton) {
  std::size_t i = 0;
  while ((i = skeleton.find('{', i)) != std::string_view::npos) {
    const std::size_t close = skeleton.find('}', i);
    if (close == std::string_view::npos)
      raise(Errc::TemplateError, "unterminated placeholder in template");
    if (!known_slots().count(skeleton.substr(i + 1, close - i - 1)))
      raise(Errc::TemplateError,
            "unknown placeholder {" + std::string(skeleton.substr(i + 1, close - i - 1)) + "}");
    i = close + 1;
  }
}

}  // namespace detail

// The six template families; placeholders are validated at first use.
inline const std::vector<TemplateFamily>& template_families() {
  static const std::vector<TemplateFamily> families = [] {
    std::map<FamilyName, TemplateFamily> grouped;
    for (auto f : {FamilyName::Captioning, FamilyName::ChainOfThought, FamilyName::Grounding,
                   FamilyName::PciSpecific, FamilyName::Corrective, FamilyName::MultiTurn})
      grouped[f] = {f, {}};
    for (const auto& entry : detail::instruction_skeletons()) {
      for (std::size_t k = 0; k < entry.variants.size(); ++k) {
        detail::validate_skeleton(entry.variants[k]);
        grouped[family_of(entry.task)].templates.push_back(
            {entry.task, kAllLengthVariants[k], entry.variants[k]});
      }
    }
    std::vector<TemplateFamily> out;
    for (auto& [_, family] : grouped) out.push_back(std::move(family));
    return out;
  }();
  return families;
}

inline std::string_view instruction_skeleton(TaskId task, LengthVariant length) {
  for (const auto& entry : detail::instruction_skeletons())
    if (entry.task == task) return entry.variants[static_cast<std::size_t>(length)];
  raise(Errc::TemplateError, "no instruction skeleton for task");
}

}  // namespace pavekit::genkit
