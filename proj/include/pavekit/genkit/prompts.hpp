#pragma once

#include <map>
#include <string>

#include "pavekit/core/taxonomy.hpp"
#include "pavekit/error.hpp"

namespace pavekit::genkit {

// Three-part system prompt: domain terminology rules, standards compliance
// requirements, and per-task generation constraints.
struct PromptSpec {
  std::string domain_block;
  std::string standards_block;
  std::string task_block;
  TaskId task = TaskId::SingleObjectGrounding;

  std::string text() const {
    return "## Domain\n" + domain_block + "\n\n## Standards\n" + standards_block + "\n\n## Task\n" +
           task_block + "\n";
  }
};

struct PromptRegistry {
  std::string domain_block;
  std::string standards_block;
  std::map<TaskId, std::string> task_blocks;
};

// Ordered concatenation with named section headers; same inputs give
// byte-identical prompts.
inline PromptSpec compose_prompt(TaskId task, const PromptRegistry& registry) {
  if (registry.domain_block.empty() || registry.standards_block.empty())
    raise(Errc::InvalidArgument, "registry domain/standards blocks must be non-empty");
  const auto it = registry.task_blocks.find(task);
  if (it == registry.task_blocks.end() || it->second.empty())
    raise(Errc::MissingTaskBlock, "no task block registered for " + std::string(to_string(task)));
  return {registry.domain_block, registry.standards_block, it->second, task};
}

// Shipped default blocks. These are tool-authored texts, not reproductions of
// any external prompt set.
inline const PromptRegistry& default_prompt_registry() {
  static const PromptRegistry registry = [] {
    PromptRegistry r;
    r.domain_block =
        "You are a pavement engineering assistant. Use precise distress terminology "
        "(longitudinal crack, transverse crack, alligator crack, block crack, reflective crack, "
        "oblique crack, edge crack, pothole, patch, manhole, rut, repair). Refer to severities "
        "only as Low, Medium, or High. Express bounding boxes as [x1, y1, x2, y2] integer pixel "
        "coordinates with the origin at the top-left corner.";
    r.standards_block =
        "Responses must be consistent with ASTM D6433 survey practice: severity ratings follow "
        "the standard's distress definitions, PCI values lie on the 0-100 scale (100 = excellent), "
        "and condition categories are Good, Fair, Poor, or Failed. Never invent measurements that "
        "are not supported by the provided annotation data.";
    for (const auto& t : taxonomy()) {
      std::string block = "Task: " + std::string(to_string(t.id)) + ". ";
      switch (answer_format_of(t.id)) {
        case AnswerFormat::Coordinates:
          block += "Answer with the requested bounding box or boxes as [x1, y1, x2, y2] integers, "
                   "quoting coordinates exactly from the annotation data.";
          break;
        case AnswerFormat::Numeric:
          block += "Answer with the numeric PCI value from the annotation data and a brief "
                   "engineering justification.";
          break;
        case AnswerFormat::MultipleChoice:
          block += "Answer with the single correct option letter in parentheses, then restate the "
                   "option text.";
          break;
        case AnswerFormat::ShortAnswer:
          block += "Answer in one short phrase using the controlled vocabulary.";
          break;
        case AnswerFormat::ChainOfThought:
          block += "Answer with numbered reasoning steps (Step 1:, Step 2:, ...) ending in a "
                   "clear conclusion.";
          break;
        case AnswerFormat::Checklist:
          block += "Answer as a checklist of '- item: value' lines covering the survey form.";
          break;
        case AnswerFormat::Descriptive:
          block += "Answer with a technically precise free-text description grounded in the "
                   "annotation data.";
          break;
      }
      r.task_blocks[t.id] = std::move(block);
    }
    return r;
  }();
  return registry;
}

}  // namespace pavekit::genkit
