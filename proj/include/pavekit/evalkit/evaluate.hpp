#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pavekit/evalkit/detection.hpp"
#include "pavekit/evalkit/generation.hpp"
#include "pavekit/evalkit/judge.hpp"
#include "pavekit/evalkit/predictions.hpp"
#include "pavekit/evalkit/regression.hpp"
#include "pavekit/evalkit/vqa.hpp"

namespace pavekit::evalkit {

struct MetricSelection {
  bool grounding = true;
  bool region = true;
  bool vqa = true;
  bool pci = true;
  bool caption = true;
  bool judge = false;  // needs a provider
  bool parsing = true;

  static MetricSelection all() { return {true, true, true, true, true, true, true}; }
};

inline std::optional<MetricSelection> selection_from_list(const std::vector<std::string>& names) {
  MetricSelection sel{false, false, false, false, false, false, false};
  for (const auto& name : names) {
    if (name == "grounding") sel.grounding = true;
    else if (name == "region") sel.region = true;
    else if (name == "vqa") sel.vqa = true;
    else if (name == "pci") sel.pci = true;
    else if (name == "caption") sel.caption = true;
    else if (name == "judge") sel.judge = true;
    else if (name == "parsing") sel.parsing = true;
    else if (name == "all") sel = MetricSelection::all();
    else return std::nullopt;
  }
  return sel;
}

struct MetricReport {
  nlohmann::json document;
  bool had_errors = false;

  std::string table() const;
};

// Scores prediction files against corpus ground truth, grouped the way the
// benchmark families group them: perception (region analysis + spatial
// grounding), understanding (VQA + PCI regression), explanatory (captioning
// + judged reasoning).
inline MetricReport evaluate_predictions(const std::vector<InstructionRecord>& corpus,
                                         const std::vector<PredictionRecord>& predictions,
                                         const MetricSelection& selection,
                                         genkit::Provider* judge_provider = nullptr) {
  if (predictions.empty()) raise(Errc::EmptyPredictionSet, "no predictions to score");

  std::map<std::string, const InstructionRecord*> by_id;
  for (const auto& rec : corpus) by_id[rec.record_id] = &rec;
  for (const auto& pred : predictions)
    if (!by_id.count(pred.record_id))
      raise(Errc::UnknownRecordId, "prediction '" + pred.record_id + "' not in corpus");

  MetricReport report;
  auto& doc = report.document;
  doc["metadata"] = {{"tokenizer", std::string(kTokenizerVersion)},
                     {"bleu_smoothing", std::string(kBleuSmoothing)},
                     {"cider_convention", std::string(kCiderConvention)},
                     {"iou_threshold", 0.5},
                     {"judge_rubric", std::string(kJudgeRubricVersion)}};

  // spatial grounding
  std::size_t g_tp = 0, g_fp = 0, g_fn = 0, g_records = 0;
  std::vector<double> g_ious;        // matched pairs at tau = 0.5
  std::vector<double> g_record_ious; // unthresholded per-record localization quality
  // region analysis
  std::map<std::string, std::string> field_preds[3], field_gts[3];
  // vqa
  std::map<std::string, std::string> vqa_preds, vqa_gts;
  // pci
  std::vector<double> pci_preds, pci_gts;
  std::size_t pci_unparsed = 0;
  // captioning
  std::vector<TokenSeq> caption_cands;
  std::vector<std::vector<TokenSeq>> caption_refs;
  std::vector<double> bleu_scores, rouge_scores;
  // reasoning
  std::vector<JudgeResult> judgements;
  std::string judge_error;
  // parsing
  std::size_t parsed_ok = 0;

  for (const auto& pred : predictions) {
    const InstructionRecord& rec = *by_id[pred.record_id];
    const ParsedPrediction parsed = parse_prediction(pred.raw_text);
    if (parses_for(parsed, rec.answer_format)) ++parsed_ok;

    switch (rec.answer_format) {
      case AnswerFormat::Coordinates: {
        if (!selection.grounding) break;
        std::vector<BoxAbs> pred_boxes, gt_boxes;
        for (const auto& b : parsed.boxes)
          if (b[0] <= b[2] && b[1] <= b[3])
            pred_boxes.push_back({static_cast<double>(b[0]), static_cast<double>(b[1]),
                                  static_cast<double>(b[2]), static_cast<double>(b[3])});
        for (const auto& b : rec.ground_truth.boxes)
          gt_boxes.push_back({static_cast<double>(b.box[0]), static_cast<double>(b.box[1]),
                              static_cast<double>(b.box[2]), static_cast<double>(b.box[3])});
        const MatchResult match = match_detections(pred_boxes, gt_boxes, 0.5);
        g_tp += match.tp;
        g_fp += match.fp;
        g_fn += match.fn;
        g_ious.insert(g_ious.end(), match.matched_ious.begin(), match.matched_ious.end());
        // Table-3-style mIoU: one-to-one pairing without a threshold, missing
        // and spurious boxes dragging the record average down
        const MatchResult loose = match_detections(pred_boxes, gt_boxes, 1e-9);
        double iou_sum = 0;
        for (const double v : loose.matched_ious) iou_sum += v;
        const std::size_t denom = std::max(pred_boxes.size(), gt_boxes.size());
        g_record_ious.push_back(denom > 0 ? iou_sum / static_cast<double>(denom) : 0.0);
        ++g_records;
        break;
      }
      case AnswerFormat::ShortAnswer:
      case AnswerFormat::MultipleChoice: {
        if (selection.region) {
          static const std::map<TaskId, int> field_slot = {
              {TaskId::DistressIdentification, 0}, {TaskId::SeverityClassification, 1}};
          if (const auto it = field_slot.find(rec.task); it != field_slot.end()) {
            const char* key = it->second == 0 ? "distress" : "severity";
            const auto gt_it = rec.ground_truth.fields.find(key);
            const auto pr_it = parsed.fields.find(key);
            if (gt_it != rec.ground_truth.fields.end()) {
              field_gts[it->second][rec.record_id] = gt_it->second;
              if (pr_it != parsed.fields.end())
                field_preds[it->second][rec.record_id] = pr_it->second;
            }
          }
        }
        // exact/relaxed answer matching is defined on single-turn answers;
        // consultations contribute via their extracted content instead
        if (selection.vqa && rec.ground_truth.answer && rec.turns.size() == 2) {
          vqa_gts[rec.record_id] = *rec.ground_truth.answer;
          vqa_preds[rec.record_id] = pred.raw_text;
        }
        break;
      }
      case AnswerFormat::Numeric: {
        if (!selection.pci || !rec.ground_truth.pci) break;
        if (parsed.pci) {
          pci_preds.push_back(*parsed.pci);
          pci_gts.push_back(*rec.ground_truth.pci);
        } else {
          ++pci_unparsed;
        }
        break;
      }
      case AnswerFormat::Descriptive: {
        if (selection.region && rec.task == TaskId::TreatmentRecommendation) {
          const auto gt_it = rec.ground_truth.fields.find("repair");
          const auto pr_it = parsed.fields.find("repair");
          if (gt_it != rec.ground_truth.fields.end()) {
            field_gts[2][rec.record_id] = gt_it->second;
            if (pr_it != parsed.fields.end()) field_preds[2][rec.record_id] = pr_it->second;
          }
        }
        if (selection.caption) {
          const TokenSeq cand = tokenize(pred.raw_text);
          const TokenSeq ref = tokenize(rec.assistant_text());
          caption_cands.push_back(cand);
          caption_refs.push_back({ref});
          bleu_scores.push_back(cand.empty() ? 0.0 : bleu4(cand, {ref}));
          rouge_scores.push_back(rouge_l(cand, ref));
        }
        break;
      }
      case AnswerFormat::ChainOfThought: {
        if (!selection.judge) break;
        if (judge_provider == nullptr) {
          judge_error = "judge metrics requested without a configured provider";
          report.had_errors = true;
          break;
        }
        const std::string question = rec.turns.empty() ? "" : rec.turns.front().text;
        judgements.push_back(
            judge_score(question, pred.raw_text, rec.assistant_text(), *judge_provider));
        break;
      }
      default: break;
    }
  }

  const auto mean_of = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  if (selection.grounding) {
    MatchResult aggregate;
    aggregate.tp = g_tp;
    aggregate.fp = g_fp;
    aggregate.fn = g_fn;
    aggregate.matched_ious = g_ious;
    const DetectionScores scores = detection_scores(aggregate);
    doc["perception"]["grounding"] = {{"precision", scores.precision},
                                      {"recall", scores.recall},
                                      {"f1", scores.f1},
                                      {"mean_iou", mean_of(g_record_ious)},
                                      {"matched_mean_iou", scores.mean_iou},
                                      {"box_accuracy", scores.recall},
                                      {"tp", g_tp},
                                      {"fp", g_fp},
                                      {"fn", g_fn},
                                      {"records", g_records}};
  }

  if (selection.region) {
    const auto acc = [&](int slot, StructuredField field) -> nlohmann::json {
      if (field_gts[slot].empty()) return nullptr;
      return field_accuracy(field_preds[slot], field_gts[slot], field);
    };
    doc["perception"]["region"] = {{"distress_accuracy", acc(0, StructuredField::Distress)},
                                   {"severity_accuracy", acc(1, StructuredField::Severity)},
                                   {"repair_accuracy", acc(2, StructuredField::Repair)},
                                   {"records", field_gts[0].size() + field_gts[1].size() +
                                                   field_gts[2].size()}};
  }

  if (selection.vqa) {
    if (!vqa_gts.empty()) {
      const VqaAccuracy acc = vqa_accuracy(vqa_preds, vqa_gts);
      doc["understanding"]["vqa"] = {{"exact", acc.exact}, {"relaxed", acc.relaxed},
                                     {"records", acc.count}};
    } else {
      doc["understanding"]["vqa"] = {{"records", 0}};
    }
  }

  if (selection.pci) {
    if (!pci_preds.empty()) {
      const RegressionScores scores = regression_scores(pci_preds, pci_gts);
      doc["understanding"]["pci"] = {{"mae", scores.mae},
                                     {"mse", scores.mse},
                                     {"rmse", scores.rmse},
                                     {"r2", scores.r2 ? nlohmann::json(*scores.r2) : nullptr},
                                     {"records", pci_preds.size()},
                                     {"unparsed", pci_unparsed}};
    } else {
      doc["understanding"]["pci"] = {{"records", 0}, {"unparsed", pci_unparsed}};
    }
  }

  if (selection.caption) {
    nlohmann::json section = {{"records", caption_cands.size()}};
    if (!caption_cands.empty()) {
      section["bleu4"] = mean_of(bleu_scores);
      section["rouge_l"] = mean_of(rouge_scores);
      if (caption_cands.size() >= 2)
        section["cider"] = cider(caption_cands, caption_refs).corpus;
      else
        section["cider"] = nullptr;
    }
    doc["explanatory"]["captioning"] = std::move(section);
  }

  if (selection.judge) {
    if (!judge_error.empty()) {
      doc["explanatory"]["reasoning"] = {{"error", judge_error}};
    } else {
      const JudgeSummary summary = summarize_judgements(judgements);
      nlohmann::json dims;
      for (std::size_t d = 0; d < kJudgeDimensions.size(); ++d)
        dims[std::string(kJudgeDimensions[d])] = summary.mean_dimensions[d];
      doc["explanatory"]["reasoning"] = {{"mean_score", summary.mean_score},
                                         {"pass_rate", summary.pass_rate},
                                         {"dimensions", dims},
                                         {"records", summary.count}};
    }
  }

  if (selection.parsing)
    doc["overall"] = {{"predictions", predictions.size()},
                      {"parsing_rate", static_cast<double>(parsed_ok) /
                                           static_cast<double>(predictions.size())}};

  return report;
}

inline std::string MetricReport::table() const {
  std::string out = "Metric report\n";
  const auto add_line = [&](const std::string& name, const nlohmann::json& v) {
    out += "  " + name + ": " + (v.is_null() ? "n/a" : v.dump()) + "\n";
  };
  if (document.contains("perception")) {
    out += "Perception\n";
    if (document["perception"].contains("grounding"))
      for (const auto& [k, v] : document["perception"]["grounding"].items())
        add_line("grounding." + k, v);
    if (document["perception"].contains("region"))
      for (const auto& [k, v] : document["perception"]["region"].items()) add_line("region." + k, v);
  }
  if (document.contains("understanding")) {
    out += "Understanding\n";
    for (const auto& [section, values] : document["understanding"].items())
      for (const auto& [k, v] : values.items()) add_line(section + "." + k, v);
  }
  if (document.contains("explanatory")) {
    out += "Explanatory\n";
    for (const auto& [section, values] : document["explanatory"].items())
      for (const auto& [k, v] : values.items()) add_line(section + "." + k, v);
  }
  if (document.contains("overall")) {
    out += "Overall\n";
    for (const auto& [k, v] : document["overall"].items()) add_line(k, v);
  }
  return out;
}

}  // namespace pavekit::evalkit
