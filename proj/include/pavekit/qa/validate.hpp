#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pavekit/core/labels.hpp"
#include "pavekit/core/types.hpp"
#include "pavekit/evalkit/predictions.hpp"
#include "pavekit/genkit/generate.hpp"

namespace pavekit::qa {

// Every failure code a ValidationReport may carry, with its meaning.
inline const std::map<std::string, std::string>& failure_code_registry() {
  static const std::map<std::string, std::string> registry = {
      {"ImageRefCount", "image reference count does not fit the task type"},
      {"TurnStructure", "turns do not alternate user/assistant with the required count"},
      {"EmptyResponse", "an assistant turn or required answer text is empty"},
      {"MissingCoordinates", "coordinate answer lacks a parseable [x1, y1, x2, y2] list"},
      {"MalformedCoordinates", "coordinate answer box has inverted corners"},
      {"BoxOutOfImage", "coordinate answer lies outside the image dimensions"},
      {"BoxMismatch", "coordinate answer does not match any source annotation box"},
      {"MissingPci", "numeric answer lacks a PCI value"},
      {"PciOutOfRange", "a PCI value lies outside [0, 100]"},
      {"MissingChoice", "multiple-choice answer lacks an option letter"},
      {"MissingChecklist", "checklist answer has no '- item: value' lines"},
      {"UnknownSeverity", "a severity mention is outside the Low/Medium/High vocabulary"},
      {"UnknownDistressLabel", "a distress mention is outside the canonical vocabulary"},
  };
  return registry;
}

struct ValidationReport {
  std::string record_id;
  bool pass = true;
  std::vector<std::pair<std::string, std::string>> failures;  // code, message
  std::size_t checks_run = 0;
};

namespace detail {

inline bool severity_word_ok(std::string_view value) {
  const std::string v = evalkit::normalize_compact(value);
  return v == "low" || v == "medium" || v == "high" || v == "unrated";
}

inline std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    std::size_t a = start, b = comma;
    while (a < b && value[a] == ' ') ++a;
    while (b > a && value[b - 1] == ' ') --b;
    if (b > a) out.emplace_back(value.substr(a, b - a));
    if (comma == value.size()) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

// Stage-4 structural and domain checks for one record. Failures are data,
// not errors. When the source annotation is supplied, coordinate answers are
// cross-checked against its boxes.
inline ValidationReport validate_record(const InstructionRecord& record,
                                        const UnifiedAnnotation* annotation = nullptr,
                                        const AliasTable& aliases = AliasTable::builtin()) {
  ValidationReport report;
  report.record_id = record.record_id;
  const auto fail = [&](const char* code, std::string msg) {
    report.failures.emplace_back(code, std::move(msg));
  };
  const auto check = [&] { ++report.checks_run; };

  check();
  if (record.image_refs.empty())
    fail("ImageRefCount", "record has no image reference");
  else if (record.image_refs.size() > 1 && record.task != TaskId::MultiImageComparison)
    fail("ImageRefCount", "multiple images on a single-image task");

  check();
  bool structure_ok = record.turns.size() >= 2 && record.turns.size() % 2 == 0;
  for (std::size_t i = 0; structure_ok && i < record.turns.size(); ++i) {
    const Role expected = i % 2 == 0 ? Role::User : Role::Assistant;
    if (record.turns[i].role != expected) structure_ok = false;
  }
  if (structure_ok) {
    if (record.task == TaskId::MultiTurnConsultation)
      structure_ok = record.turns.size() >= 4;
    else
      structure_ok = record.turns.size() == 2;
  }
  if (!structure_ok) fail("TurnStructure", "turn list violates the alternation contract");

  check();
  for (const auto& turn : record.turns)
    if (turn.text.empty()) {
      fail("EmptyResponse", "empty turn text");
      break;
    }

  const std::string answer = record.assistant_text();
  const evalkit::ParsedPrediction parsed = evalkit::parse_prediction(answer);

  check();
  switch (record.answer_format) {
    case AnswerFormat::Coordinates: {
      if (parsed.boxes.empty()) {
        fail("MissingCoordinates", "no [x1, y1, x2, y2] answer found");
        break;
      }
      for (const auto& b : parsed.boxes) {
        if (b[0] > b[2] || b[1] > b[3]) {
          fail("MalformedCoordinates", "inverted box " + genkit::detail::box_str(b));
          continue;
        }
        if (record.ground_truth.dims) {
          const auto& dims = *record.ground_truth.dims;
          if (b[0] < 0 || b[1] < 0 || b[2] > dims.width || b[3] > dims.height)
            fail("BoxOutOfImage", genkit::detail::box_str(b) + " exceeds " +
                                      std::to_string(dims.width) + "x" + std::to_string(dims.height));
        }
        if (annotation) {
          const BoxAbs answer_box{static_cast<double>(b[0]), static_cast<double>(b[1]),
                                  static_cast<double>(b[2]), static_cast<double>(b[3])};
          bool matched = false;
          for (const auto& inst : annotation->instances)
            if (iou(answer_box, inst.box) >= 0.99) matched = true;
          if (!matched)
            fail("BoxMismatch", genkit::detail::box_str(b) + " matches no source box at IoU >= 0.99");
        }
      }
      break;
    }
    case AnswerFormat::Numeric: {
      if (!parsed.pci)
        fail("MissingPci", "no PCI value found in the answer");
      else if (!(*parsed.pci >= 0.0 && *parsed.pci <= 100.0))
        fail("PciOutOfRange", "answer PCI " + genkit::detail::format_number(*parsed.pci));
      break;
    }
    case AnswerFormat::MultipleChoice:
      if (!parsed.choice) fail("MissingChoice", "no option letter found");
      break;
    case AnswerFormat::Checklist:
      if (parsed.checklist.empty()) fail("MissingChecklist", "no checklist lines found");
      break;
    default:
      if (answer.empty()) fail("EmptyResponse", "empty answer text");
      break;
  }

  check();
  if (record.ground_truth.pci && !(*record.ground_truth.pci >= 0.0 && *record.ground_truth.pci <= 100.0))
    fail("PciOutOfRange", "ground-truth PCI " + genkit::detail::format_number(*record.ground_truth.pci));

  // lexicon screen over structured severity / distress mentions
  check();
  const auto screen_severity = [&](std::string_view value) {
    if (!detail::severity_word_ok(value)) fail("UnknownSeverity", std::string(value));
  };
  const auto screen_distress = [&](std::string_view value) {
    for (const auto& item : detail::split_list(value))
      if (item != "none recorded" && !aliases.is_canonical(item))
        fail("UnknownDistressLabel", item);
  };
  if (auto it = parsed.fields.find("severity"); it != parsed.fields.end())
    screen_severity(it->second);
  if (auto it = parsed.fields.find("distress"); it != parsed.fields.end())
    screen_distress(it->second);
  for (const auto& [key, value] : parsed.checklist) {
    if (key == "dominant severity") screen_severity(value);
    if (key == "distress types") screen_distress(value);
  }

  report.pass = report.failures.empty();
  return report;
}

struct CorpusValidation {
  std::size_t records = 0;
  std::size_t passed = 0;
  std::optional<double> pass_rate;  // absent for an empty stream
  std::map<std::string, std::size_t> failure_histogram;
  std::vector<ValidationReport> failing_reports;
};

template <typename RecordRange>
CorpusValidation validate_corpus(const RecordRange& records,
                                 const AliasTable& aliases = AliasTable::builtin()) {
  CorpusValidation summary;
  for (const auto& record : records) {
    ++summary.records;
    ValidationReport report = validate_record(record, nullptr, aliases);
    if (report.pass) {
      ++summary.passed;
    } else {
      for (const auto& [code, _] : report.failures) ++summary.failure_histogram[code];
      summary.failing_reports.push_back(std::move(report));
    }
  }
  if (summary.records > 0)
    summary.pass_rate = static_cast<double>(summary.passed) / static_cast<double>(summary.records);
  return summary;
}

}  // namespace pavekit::qa
