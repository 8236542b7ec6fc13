#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pavekit/core/types.hpp"
#include "pavekit/evalkit/predictions.hpp"

namespace pavekit::cli {

inline constexpr int kCorpusSchemaVersion = 1;

using nlohmann::json;

inline json to_json(const UnifiedAnnotation& a) {
  json j;
  j["image_ref"] = a.image_ref;
  j["dims"] = {{"width", a.dims.width}, {"height", a.dims.height}};
  j["source_dataset"] = a.source_dataset;
  j["instances"] = json::array();
  for (const auto& inst : a.instances) {
    json e;
    e["box"] = {inst.box.x_min, inst.box.y_min, inst.box.x_max, inst.box.y_max};
    e["label"] = inst.distress.canonical_label;
    e["source_label"] = inst.distress.source_label;
    if (inst.severity) e["severity"] = std::string(to_string(*inst.severity));
    j["instances"].push_back(std::move(e));
  }
  if (a.condition) j["condition"] = std::string(to_string(a.condition->label));
  if (a.pci) j["pci"] = a.pci->value;
  return j;
}

inline UnifiedAnnotation annotation_from_json(const json& j) {
  UnifiedAnnotation a;
  a.image_ref = j.at("image_ref").get<std::string>();
  a.dims = make_dims(j.at("dims").at("width").get<int>(), j.at("dims").at("height").get<int>());
  a.source_dataset = j.value("source_dataset", "");
  for (const auto& e : j.value("instances", json::array())) {
    Instance inst;
    const auto& b = e.at("box");
    inst.box = make_box_abs(b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                            b.at(3).get<double>());
    inst.distress.canonical_label = e.at("label").get<std::string>();
    inst.distress.source_label = e.value("source_label", inst.distress.canonical_label);
    inst.distress.source_dataset = a.source_dataset;
    if (e.contains("severity")) inst.severity = severity_from_string(e["severity"].get<std::string>());
    a.instances.push_back(std::move(inst));
  }
  if (j.contains("condition")) {
    const auto label = condition_label_from_string(j["condition"].get<std::string>());
    if (!label) raise(Errc::MalformedJson, "bad condition label on " + a.image_ref);
    a.condition = condition_from_label(*label);
  }
  if (j.contains("pci")) a.pci = make_pci(j["pci"].get<double>());
  return a;
}

inline json to_json(const InstructionRecord& rec) {
  json j;
  j["schema_version"] = kCorpusSchemaVersion;
  j["record_id"] = rec.record_id;
  j["image_refs"] = rec.image_refs;
  j["task"] = std::string(to_string(rec.task));
  j["category"] = std::string(to_string(category_of(rec.task)));
  j["length"] = std::string(to_string(rec.length));
  j["answer_format"] = std::string(to_string(rec.answer_format));
  j["source_dataset"] = rec.source_dataset;
  j["turns"] = json::array();
  for (const auto& turn : rec.turns)
    j["turns"].push_back({{"role", turn.role == Role::User ? "user" : "assistant"},
                          {"text", turn.text}});

  json gt;
  if (rec.ground_truth.dims)
    gt["dims"] = {{"width", rec.ground_truth.dims->width},
                  {"height", rec.ground_truth.dims->height}};
  if (!rec.ground_truth.boxes.empty()) {
    gt["boxes"] = json::array();
    for (const auto& b : rec.ground_truth.boxes) {
      json e;
      e["label"] = b.label;
      e["box"] = b.box;
      if (b.severity) e["severity"] = std::string(to_string(*b.severity));
      gt["boxes"].push_back(std::move(e));
    }
  }
  if (rec.ground_truth.pci) gt["pci"] = *rec.ground_truth.pci;
  if (rec.ground_truth.condition) gt["condition"] = *rec.ground_truth.condition;
  if (rec.ground_truth.answer) gt["answer"] = *rec.ground_truth.answer;
  if (rec.ground_truth.choice) gt["choice"] = std::string(1, *rec.ground_truth.choice);
  if (!rec.ground_truth.fields.empty()) gt["fields"] = rec.ground_truth.fields;
  if (!gt.empty()) j["ground_truth"] = std::move(gt);
  return j;
}

inline InstructionRecord record_from_json(const json& j) {
  InstructionRecord rec;
  rec.record_id = j.at("record_id").get<std::string>();
  rec.image_refs = j.at("image_refs").get<std::vector<std::string>>();
  const auto task = task_from_string(j.at("task").get<std::string>());
  if (!task) raise(Errc::MalformedJson, "unknown task on " + rec.record_id);
  rec.task = *task;
  const auto length = length_from_string(j.at("length").get<std::string>());
  if (!length) raise(Errc::MalformedJson, "unknown length on " + rec.record_id);
  rec.length = *length;
  const auto format = answer_format_from_string(j.at("answer_format").get<std::string>());
  if (!format) raise(Errc::MalformedJson, "unknown answer format on " + rec.record_id);
  rec.answer_format = *format;
  rec.source_dataset = j.value("source_dataset", "");
  for (const auto& t : j.at("turns")) {
    Turn turn;
    turn.role = t.at("role").get<std::string>() == "user" ? Role::User : Role::Assistant;
    turn.text = t.at("text").get<std::string>();
    rec.turns.push_back(std::move(turn));
  }
  if (j.contains("ground_truth")) {
    const auto& gt = j["ground_truth"];
    if (gt.contains("dims"))
      rec.ground_truth.dims =
          ImageDims{gt["dims"].at("width").get<int>(), gt["dims"].at("height").get<int>()};
    for (const auto& e : gt.value("boxes", json::array())) {
      GtBox b;
      b.label = e.at("label").get<std::string>();
      const auto& arr = e.at("box");
      for (std::size_t k = 0; k < 4; ++k) b.box[k] = arr.at(k).get<long long>();
      if (e.contains("severity")) b.severity = severity_from_string(e["severity"].get<std::string>());
      rec.ground_truth.boxes.push_back(std::move(b));
    }
    if (gt.contains("pci")) rec.ground_truth.pci = gt["pci"].get<double>();
    if (gt.contains("condition")) rec.ground_truth.condition = gt["condition"].get<std::string>();
    if (gt.contains("answer")) rec.ground_truth.answer = gt["answer"].get<std::string>();
    if (gt.contains("choice")) {
      const auto s = gt["choice"].get<std::string>();
      if (!s.empty()) rec.ground_truth.choice = s[0];
    }
    if (gt.contains("fields"))
      rec.ground_truth.fields = gt["fields"].get<std::map<std::string, std::string>>();
  }
  return rec;
}

template <typename T, typename FromJson>
std::vector<T> read_jsonl(const std::filesystem::path& path, FromJson from_json_fn) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(from_json_fn(json::parse(line)));
    } catch (const json::exception& e) {
      raise(Errc::MalformedJson, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<UnifiedAnnotation> read_annotations(const std::filesystem::path& path) {
  return read_jsonl<UnifiedAnnotation>(path, annotation_from_json);
}

inline std::vector<InstructionRecord> read_corpus(const std::filesystem::path& path) {
  return read_jsonl<InstructionRecord>(path, record_from_json);
}

inline std::vector<evalkit::PredictionRecord> read_predictions(const std::filesystem::path& path) {
  return read_jsonl<evalkit::PredictionRecord>(path, [](const json& j) {
    return evalkit::PredictionRecord{j.at("record_id").get<std::string>(),
                                     j.at("raw_text").get<std::string>()};
  });
}

template <typename Range, typename ToJson>
void write_jsonl(const std::filesystem::path& path, const Range& items, ToJson to_json_fn) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot write " + path.string());
  for (const auto& item : items) out << to_json_fn(item).dump() << "\n";
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot write " + path.string());
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace pavekit::cli
