#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace pavekit {

enum class TaskCategory {
  SpatialReasoning,
  ConditionAssessment,
  ProfessionalWorkflow,
  ReasoningAnalysis,
  MultiModalInteraction,
};

enum class TaskId {
  // spatial reasoning
  SingleObjectGrounding,
  MultiObjectEnumeration,
  SpatialRelationshipAnalysis,
  ReferringExpressionComprehension,
  DenseRegionDescription,
  CountingWithGrounding,
  RankingAndSizeAnalysis,
  MultiChoiceGrounding,
  AttributeGrounding,
  // condition assessment
  PciAssessment,
  SeverityClassification,
  ConditionClassification,
  PerformanceAssessment,
  QuickAssessment,
  DetailedEngineeringAnalysis,
  DistressIdentification,
  // professional workflow
  InfrastructureAnalysis,
  TreatmentRecommendation,
  SafetyAnalysis,
  FieldPracticalAssessment,
  ChecklistFilling,
  MaintenanceDecision,
  // reasoning and analysis
  ChainOfThought,
  ComplexEngineeringReasoning,
  ComparativeAnalysis,
  CorrectiveReasoning,
  StepByStepReasoning,
  CounterfactualAnalysis,
  // multi-modal interaction
  MultiLengthCaption,
  MultiTurnConsultation,
  MultiImageComparison,
  SceneSummarization,
};

inline constexpr std::size_t kTaskCount = 32;

// The answer format a task's response is rendered and validated in.
enum class AnswerFormat {
  Coordinates,
  Descriptive,
  ShortAnswer,
  MultipleChoice,
  ChainOfThought,
  Numeric,
  Checklist,
};

struct TaskType {
  TaskId id;
  TaskCategory category;
};

namespace detail {

struct TaskInfo {
  TaskId id;
  TaskCategory category;
  std::string_view name;
  AnswerFormat format;
};

inline const std::array<TaskInfo, kTaskCount>& task_table() {
  using C = TaskCategory;
  using F = AnswerFormat;
  static const std::array<TaskInfo, kTaskCount> table = {{
      {TaskId::SingleObjectGrounding, C::SpatialReasoning, "single_object_grounding", F::Coordinates},
      {TaskId::MultiObjectEnumeration, C::SpatialReasoning, "multi_object_enumeration", F::Coordinates},
      {TaskId::SpatialRelationshipAnalysis, C::SpatialReasoning, "spatial_relationship_analysis", F::Descriptive},
      {TaskId::ReferringExpressionComprehension, C::SpatialReasoning, "referring_expression_comprehension", F::Coordinates},
      {TaskId::DenseRegionDescription, C::SpatialReasoning, "dense_region_description", F::Descriptive},
      {TaskId::CountingWithGrounding, C::SpatialReasoning, "counting_with_grounding", F::Coordinates},
      {TaskId::RankingAndSizeAnalysis, C::SpatialReasoning, "ranking_and_size_analysis", F::Descriptive},
      {TaskId::MultiChoiceGrounding, C::SpatialReasoning, "multi_choice_grounding", F::MultipleChoice},
      {TaskId::AttributeGrounding, C::SpatialReasoning, "attribute_grounding", F::Descriptive},
      {TaskId::PciAssessment, C::ConditionAssessment, "pci_assessment", F::Numeric},
      {TaskId::SeverityClassification, C::ConditionAssessment, "severity_classification", F::ShortAnswer},
      {TaskId::ConditionClassification, C::ConditionAssessment, "condition_classification", F::ShortAnswer},
      {TaskId::PerformanceAssessment, C::ConditionAssessment, "performance_assessment", F::Descriptive},
      {TaskId::QuickAssessment, C::ConditionAssessment, "quick_assessment", F::ShortAnswer},
      {TaskId::DetailedEngineeringAnalysis, C::ConditionAssessment, "detailed_engineering_analysis", F::Descriptive},
      {TaskId::DistressIdentification, C::ConditionAssessment, "distress_identification", F::ShortAnswer},
      {TaskId::InfrastructureAnalysis, C::ProfessionalWorkflow, "infrastructure_analysis", F::Descriptive},
      {TaskId::TreatmentRecommendation, C::ProfessionalWorkflow, "treatment_recommendation", F::Descriptive},
      {TaskId::SafetyAnalysis, C::ProfessionalWorkflow, "safety_analysis", F::Descriptive},
      {TaskId::FieldPracticalAssessment, C::ProfessionalWorkflow, "field_practical_assessment", F::Descriptive},
      {TaskId::ChecklistFilling, C::ProfessionalWorkflow, "checklist_filling", F::Checklist},
      {TaskId::MaintenanceDecision, C::ProfessionalWorkflow, "maintenance_decision", F::Descriptive},
      {TaskId::ChainOfThought, C::ReasoningAnalysis, "chain_of_thought", F::ChainOfThought},
      {TaskId::ComplexEngineeringReasoning, C::ReasoningAnalysis, "complex_engineering_reasoning", F::ChainOfThought},
      {TaskId::ComparativeAnalysis, C::ReasoningAnalysis, "comparative_analysis", F::Descriptive},
      {TaskId::CorrectiveReasoning, C::ReasoningAnalysis, "corrective_reasoning", F::ChainOfThought},
      {TaskId::StepByStepReasoning, C::ReasoningAnalysis, "step_by_step_reasoning", F::ChainOfThought},
      {TaskId::CounterfactualAnalysis, C::ReasoningAnalysis, "counterfactual_analysis", F::Descriptive},
      {TaskId::MultiLengthCaption, C::MultiModalInteraction, "multi_length_caption", F::Descriptive},
      {TaskId::MultiTurnConsultation, C::MultiModalInteraction, "multi_turn_consultation", F::Descriptive},
      {TaskId::MultiImageComparison, C::MultiModalInteraction, "multi_image_comparison", F::Descriptive},
      {TaskId::SceneSummarization, C::MultiModalInteraction, "scene_summarization", F::Descriptive},
  }};
  return table;
}

inline const TaskInfo& task_info(TaskId id) { return task_table()[static_cast<std::size_t>(id)]; }

}  // namespace detail

// All 32 task types in declaration order (stable across calls).
inline const std::vector<TaskType>& taxonomy() {
  static const std::vector<TaskType> tasks = [] {
    std::vector<TaskType> out;
    out.reserve(kTaskCount);
    for (const auto& info : detail::task_table()) out.push_back({info.id, info.category});
    return out;
  }();
  return tasks;
}

inline TaskCategory category_of(TaskId id) { return detail::task_info(id).category; }

inline AnswerFormat answer_format_of(TaskId id) { return detail::task_info(id).format; }

inline std::string_view to_string(TaskId id) { return detail::task_info(id).name; }

inline std::string_view to_string(TaskCategory c) {
  switch (c) {
    case TaskCategory::SpatialReasoning: return "spatial_reasoning";
    case TaskCategory::ConditionAssessment: return "condition_assessment";
    case TaskCategory::ProfessionalWorkflow: return "professional_workflow";
    case TaskCategory::ReasoningAnalysis: return "reasoning_analysis";
    case TaskCategory::MultiModalInteraction: return "multi_modal_interaction";
  }
  return "unknown";
}

inline std::string_view to_string(AnswerFormat f) {
  switch (f) {
    case AnswerFormat::Coordinates: return "coordinates";
    case AnswerFormat::Descriptive: return "descriptive";
    case AnswerFormat::ShortAnswer: return "short_answer";
    case AnswerFormat::MultipleChoice: return "multiple_choice";
    case AnswerFormat::ChainOfThought: return "chain_of_thought";
    case AnswerFormat::Numeric: return "numeric";
    case AnswerFormat::Checklist: return "checklist";
  }
  return "unknown";
}

inline std::optional<TaskId> task_from_string(std::string_view name) {
  for (const auto& info : detail::task_table())
    if (info.name == name) return info.id;
  return std::nullopt;
}

inline std::optional<AnswerFormat> answer_format_from_string(std::string_view name) {
  static constexpr std::array<AnswerFormat, 7> all = {
      AnswerFormat::Coordinates,   AnswerFormat::Descriptive,    AnswerFormat::ShortAnswer,
      AnswerFormat::MultipleChoice, AnswerFormat::ChainOfThought, AnswerFormat::Numeric,
      AnswerFormat::Checklist};
  for (auto f : all)
    if (to_string(f) == name) return f;
  return std::nullopt;
}

inline const std::vector<AnswerFormat>& all_answer_formats() {
  static const std::vector<AnswerFormat> all = {
      AnswerFormat::Coordinates,    AnswerFormat::Descriptive,    AnswerFormat::ShortAnswer,
      AnswerFormat::MultipleChoice, AnswerFormat::ChainOfThought, AnswerFormat::Numeric,
      AnswerFormat::Checklist};
  return all;
}

inline const std::vector<TaskCategory>& all_task_categories() {
  static const std::vector<TaskCategory> all = {
      TaskCategory::SpatialReasoning, TaskCategory::ConditionAssessment,
      TaskCategory::ProfessionalWorkflow, TaskCategory::ReasoningAnalysis,
      TaskCategory::MultiModalInteraction};
  return all;
}

}  // namespace pavekit
