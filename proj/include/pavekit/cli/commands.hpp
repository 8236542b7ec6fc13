#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pavekit/cli/jsonl.hpp"
#include "pavekit/cli/manifest.hpp"
#include "pavekit/evalkit/evaluate.hpp"
#include "pavekit/genkit/generate.hpp"
#include "pavekit/genkit/plan.hpp"
#include "pavekit/genkit/provider_http.hpp"
#include "pavekit/harmonize/transforms.hpp"
#include "pavekit/ingest/coco.hpp"
#include "pavekit/ingest/color_folder.hpp"
#include "pavekit/ingest/image_dims.hpp"
#include "pavekit/ingest/pci_csv.hpp"
#include "pavekit/ingest/voc.hpp"
#include "pavekit/ingest/yolo.hpp"
#include "pavekit/qa/review.hpp"
#include "pavekit/qa/validate.hpp"
#include "pavekit/report/stats.hpp"

namespace pavekit::cli {

namespace fs = std::filesystem;

namespace detail {

inline std::vector<fs::path> sorted_files(const fs::path& dir, std::string_view extension) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == extension)
      out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::optional<fs::path> find_image(const fs::path& dir, const std::string& stem) {
  for (const char* ext : {".png", ".jpg", ".jpeg", ".PNG", ".JPG"}) {
    const fs::path candidate = dir / (stem + ext);
    if (fs::exists(candidate)) return candidate;
  }
  const fs::path as_is = dir / stem;  // stem already carries an extension
  if (fs::exists(as_is)) return as_is;
  return std::nullopt;
}

inline std::unique_ptr<genkit::Provider> make_provider(const std::string& name,
                                                       const std::string& model) {
  if (name == "none" || name.empty()) return nullptr;
  if (name == "mock") return std::make_unique<genkit::MockProvider>();
  if (name == "remote") {
    genkit::RemoteConfig config;
    if (const char* url = std::getenv("PROVIDER_URL")) config.url = url;
    if (const char* key = std::getenv("PROVIDER_API_KEY")) config.api_key = key;
    config.model = model;
    if (config.url.empty())
      raise(Errc::ConfigError, "remote provider selected but PROVIDER_URL is not set");
    return std::make_unique<genkit::HttpProvider>(std::move(config));
  }
  raise(Errc::ConfigError, "unknown provider '" + name + "'");
}

}  // namespace detail

struct IngestStats {
  std::size_t files = 0;
  std::size_t records = 0;
  std::size_t instances = 0;
  std::vector<std::string> skipped;
};

// Stage 1-2 driver: parse every dataset in the manifest, unify, optionally
// rescale to a common target, and write the unified store.
inline int cmd_ingest(const Manifest& manifest) {
  const fs::path out_dir = manifest.out_dir;
  std::vector<UnifiedAnnotation> annotations;
  std::map<std::string, IngestStats> per_dataset;
  const AliasTable& aliases = AliasTable::builtin();

  for (const auto& entry : manifest.datasets) {
    IngestStats stats;
    if (!fs::exists(entry.root))
      raise(Errc::IoError, "dataset '" + entry.name + "': root path " + entry.root.string() +
                               " does not exist");

    const auto guard = [&](const fs::path& file, auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        if (!manifest.lenient) raise(e.code(), file.string() + ": " + e.what());
        stats.skipped.push_back(file.string() + ": " + e.what());
      }
    };
    const auto add = [&](ingest::RawRecord record, ImageDims dims) {
      record.source_dataset = entry.name;
      UnifiedAnnotation unified = harmonize::unify(record, dims, aliases);
      if (manifest.generation.target_dims) {
        const ImageDims target = *manifest.generation.target_dims;
        for (auto& inst : unified.instances)
          inst.box = harmonize::rescale_box(inst.box, unified.dims, target);
        unified.dims = target;
      }
      stats.instances += unified.instances.size();
      ++stats.records;
      annotations.push_back(std::move(unified));
    };

    switch (entry.format) {
      case DatasetFormat::Yolo: {
        if (entry.classes.empty())
          raise(Errc::ManifestError, "dataset '" + entry.name + "' needs a classes list");
        for (const auto& label_file : detail::sorted_files(entry.root / "labels", ".txt")) {
          ++stats.files;
          guard(label_file, [&] {
            const auto image = detail::find_image(entry.root / "images", label_file.stem().string());
            if (!image) raise(Errc::IoError, "no image for label file");
            const ImageDims dims = ingest::read_image_dims(*image);
            auto record = ingest::parse_yolo(read_text(label_file), entry.classes,
                                             entry.name + "/images/" + image->filename().string());
            add(std::move(record), dims);
          });
        }
        break;
      }
      case DatasetFormat::Voc: {
        for (const auto& xml_file : detail::sorted_files(entry.root, ".xml")) {
          ++stats.files;
          guard(xml_file, [&] {
            auto record = ingest::parse_voc(read_text(xml_file));
            const ImageDims dims = std::get<ingest::VocBoxes>(record.payload).dims;
            if (record.image_ref.empty()) record.image_ref = xml_file.stem().string() + ".png";
            record.image_ref = entry.name + "/images/" + record.image_ref;
            add(std::move(record), dims);
          });
        }
        break;
      }
      case DatasetFormat::Coco: {
        for (const auto& json_file : detail::sorted_files(entry.root, ".json")) {
          ++stats.files;
          guard(json_file, [&] {
            for (auto& record : ingest::parse_coco(read_text(json_file))) {
              const ImageDims dims = std::get<ingest::CocoInstances>(record.payload).dims;
              record.image_ref = entry.name + "/" + record.image_ref;
              add(std::move(record), dims);
            }
          });
        }
        break;
      }
      case DatasetFormat::ColorFolder: {
        std::vector<fs::path> images;
        for (const char* ext : {".png", ".jpg", ".jpeg"})
          for (const auto& p : detail::sorted_files(entry.root, ext)) images.push_back(p);
        std::sort(images.begin(), images.end());
        for (const auto& image : images) {
          ++stats.files;
          guard(image, [&] {
            auto record = ingest::parse_color_folder(image);
            const ImageDims dims = ingest::read_image_dims(image);
            record.image_ref = entry.name + "/" + image.parent_path().filename().string() + "/" +
                               image.filename().string();
            add(std::move(record), dims);
          });
        }
        break;
      }
      case DatasetFormat::PciCsv: {
        for (const auto& csv_file : detail::sorted_files(entry.root, ".csv")) {
          ++stats.files;
          guard(csv_file, [&] {
            for (auto& record : ingest::parse_pci_csv(read_text(csv_file))) {
              const auto image = detail::find_image(entry.root / "images", record.image_ref);
              if (!image) raise(Errc::IoError, "no image for id '" + record.image_ref + "'");
              const ImageDims dims = ingest::read_image_dims(*image);
              record.image_ref = entry.name + "/images/" + image->filename().string();
              add(std::move(record), dims);
            }
          });
        }
        break;
      }
    }
    per_dataset[entry.name] = std::move(stats);
  }

  std::sort(annotations.begin(), annotations.end(),
            [](const UnifiedAnnotation& a, const UnifiedAnnotation& b) {
              return std::tie(a.source_dataset, a.image_ref) < std::tie(b.source_dataset, b.image_ref);
            });
  write_jsonl(out_dir / "unified.jsonl", annotations,
              [](const UnifiedAnnotation& a) { return to_json(a); });

  json summary;
  std::size_t total_records = 0, total_instances = 0, total_skipped = 0;
  for (const auto& [name, stats] : per_dataset) {
    summary["datasets"][name] = {{"files", stats.files},
                                 {"records", stats.records},
                                 {"instances", stats.instances},
                                 {"skipped", stats.skipped}};
    total_records += stats.records;
    total_instances += stats.instances;
    total_skipped += stats.skipped.size();
  }
  summary["total_records"] = total_records;
  summary["total_instances"] = total_instances;
  summary["total_skipped"] = total_skipped;
  write_text(out_dir / "ingest_summary.json", summary.dump(2) + "\n");

  std::cout << "ingest: " << total_records << " annotation(s), " << total_instances
            << " instance(s) across " << per_dataset.size() << " dataset(s)";
  if (total_skipped > 0) std::cout << ", " << total_skipped << " skipped";
  std::cout << "\n";
  return 0;
}

// Stage 3-4 driver: plan, generate, validate, write. Records failing
// validation are regenerated once under a provider, then dropped and logged.
inline int cmd_generate(const Manifest& manifest) {
  const fs::path out_dir = manifest.out_dir;
  const auto annotations = read_annotations(out_dir / "unified.jsonl");
  const auto provider = detail::make_provider(manifest.generation.provider, manifest.generation.model);

  const genkit::CorpusPlan plan = genkit::plan_corpus(annotations, manifest.generation.mix);
  const auto& registry = genkit::default_prompt_registry();
  AliasTable::builtin();  // settle shared tables before the workers start

  const auto build = [&](std::size_t index) -> InstructionRecord {
    const genkit::Assignment& assignment = plan.assignments[index];
    const UnifiedAnnotation& annotation = annotations[assignment.annotation_index];
    if (assignment.multi_turn) {
      const std::vector<genkit::PromptSpec> prompts = {
          genkit::compose_prompt(TaskId::MultiTurnConsultation, registry)};
      return genkit::build_multiturn(annotation, assignment.turn_count, prompts, provider.get(),
                                     assignment.format);
    }
    const UnifiedAnnotation* partner =
        assignment.partner_index ? &annotations[*assignment.partner_index] : nullptr;
    const genkit::PromptSpec prompt = genkit::compose_prompt(assignment.task, registry);
    return genkit::generate_record(annotation, assignment.task, assignment.length, prompt,
                                   provider.get(), partner);
  };

  // bounded in-flight generation; output order follows the plan regardless of
  // completion order
  std::vector<std::optional<InstructionRecord>> built(plan.assignments.size());
  std::vector<std::string> build_errors(plan.assignments.size());
  {
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&] {
      while (true) {
        const std::size_t index = cursor.fetch_add(1);
        if (index >= plan.assignments.size()) break;
        try {
          built[index] = build(index);
        } catch (const std::exception& e) {
          build_errors[index] = e.what();
        }
      }
    };
    const std::size_t thread_count = std::min<std::size_t>(
        std::max(1, manifest.generation.provider_concurrency), plan.assignments.size());
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t + 1 < thread_count; ++t) workers.emplace_back(worker);
    worker();
    for (auto& w : workers) w.join();
  }
  for (std::size_t i = 0; i < build_errors.size(); ++i)
    if (!build_errors[i].empty())
      raise(Errc::ProviderError, "assignment " + std::to_string(i) + ": " + build_errors[i]);

  std::vector<InstructionRecord> corpus;
  json dropped = json::array();
  std::set<std::string> seen_ids;
  std::size_t duplicates = 0;
  for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
    const UnifiedAnnotation& annotation = annotations[plan.assignments[i].annotation_index];
    InstructionRecord record = std::move(*built[i]);
    qa::ValidationReport report = qa::validate_record(record, &annotation);
    if (!report.pass && provider != nullptr) {
      record = build(i);  // one regeneration before dropping
      report = qa::validate_record(record, &annotation);
    }
    if (!report.pass) {
      json failure = {{"record_id", record.record_id},
                      {"task", std::string(to_string(record.task))},
                      {"failures", json::array()}};
      for (const auto& [code, message] : report.failures)
        failure["failures"].push_back({{"code", code}, {"message", message}});
      dropped.push_back(std::move(failure));
      continue;
    }
    // content-addressed ids: an identical id means the identical sample
    if (!seen_ids.insert(record.record_id).second) {
      ++duplicates;
      continue;
    }
    corpus.push_back(std::move(record));
  }

  write_jsonl(out_dir / "corpus.jsonl", corpus,
              [](const InstructionRecord& r) { return to_json(r); });
  write_jsonl(out_dir / "generate_errors.jsonl", dropped, [](const json& j) { return j; });

  const report::CorpusStats stats = report::compute_stats(corpus);
  write_text(out_dir / "stats.csv", report::render_report(stats, report::ReportFormat::Csv));
  write_text(out_dir / "stats.txt", report::render_report(stats, report::ReportFormat::Table));

  json summary = {{"planned", plan.assignments.size()},
                  {"written", corpus.size()},
                  {"dropped", dropped.size()},
                  {"duplicates", duplicates},
                  {"provider", manifest.generation.provider},
                  {"seed", manifest.seed}};
  write_text(out_dir / "generate_summary.json", summary.dump(2) + "\n");

  std::cout << "generate: " << corpus.size() << " record(s) written, " << dropped.size()
            << " dropped, " << duplicates << " duplicate(s)\n";
  return 0;
}

inline int cmd_validate(const fs::path& corpus_path, const std::optional<fs::path>& out_dir) {
  const auto corpus = read_corpus(corpus_path);
  const qa::CorpusValidation summary = qa::validate_corpus(corpus);

  json doc = {{"records", summary.records}, {"passed", summary.passed}};
  doc["pass_rate"] = summary.pass_rate ? json(*summary.pass_rate) : json("not-applicable");
  doc["failure_histogram"] = summary.failure_histogram;
  doc["failures"] = json::array();
  for (const auto& report : summary.failing_reports) {
    json entry = {{"record_id", report.record_id}, {"failures", json::array()}};
    for (const auto& [code, message] : report.failures)
      entry["failures"].push_back({{"code", code}, {"message", message}});
    doc["failures"].push_back(std::move(entry));
  }
  if (out_dir) write_text(*out_dir / "validation.json", doc.dump(2) + "\n");

  if (!summary.pass_rate) {
    std::cout << "validate: empty corpus, pass rate not applicable\n";
    return 0;
  }
  std::cout << "validate: " << summary.passed << "/" << summary.records << " passed";
  for (const auto& [code, count] : summary.failure_histogram)
    std::cout << ", " << code << " x" << count;
  std::cout << "\n";
  for (const auto& report : summary.failing_reports)
    for (const auto& [code, message] : report.failures)
      std::cout << "  " << report.record_id << " " << code << ": " << message << "\n";
  return *summary.pass_rate == 1.0 ? 0 : 1;
}

inline int cmd_stats(const fs::path& corpus_path, const fs::path& out_dir) {
  const auto corpus = read_corpus(corpus_path);
  const report::CorpusStats stats = report::compute_stats(corpus);
  write_text(out_dir / "stats.csv", report::render_report(stats, report::ReportFormat::Csv));
  const std::string table = report::render_report(stats, report::ReportFormat::Table);
  write_text(out_dir / "stats.txt", table);
  std::cout << table;
  return 0;
}

inline int cmd_review_export(const fs::path& corpus_path, const fs::path& out_dir,
                             std::size_t per_stratum, std::uint64_t seed) {
  const auto corpus = read_corpus(corpus_path);
  const qa::ReviewSample sample = qa::sample_for_review(corpus, per_stratum, seed);

  const fs::path review_dir = out_dir / "review";
  fs::create_directories(review_dir);
  std::string ids_csv = "record_id,category,answer_format\n";
  for (const std::size_t idx : sample.indices) {
    const InstructionRecord& rec = corpus[idx];
    write_text(review_dir / ("sheet_" + rec.record_id + ".md"), qa::render_review_sheet(rec));
    ids_csv += rec.record_id + "," + std::string(to_string(category_of(rec.task))) + "," +
               std::string(to_string(rec.answer_format)) + "\n";
  }
  write_text(review_dir / "review_ids.csv", ids_csv);

  for (const auto& warning : sample.warnings) std::cout << "warning: " << warning << "\n";
  std::cout << "review-export: " << sample.indices.size() << " sheet(s) under "
            << review_dir.string() << "\n";
  return 0;
}

inline int cmd_review_merge(const fs::path& corpus_path, const fs::path& verdicts_path,
                            const fs::path& out_path) {
  const auto corpus = read_corpus(corpus_path);
  std::set<std::string> known_ids;
  for (const auto& rec : corpus) known_ids.insert(rec.record_id);

  std::map<std::string, qa::ReviewVerdict> verdicts;
  {
    const std::string text = read_text(verdicts_path);
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = ingest::detail::split_csv_line(line);
      if (header) {
        header = false;
        if (fields.size() < 2 || fields[0] != "id")
          raise(Errc::MissingColumn, "verdicts CSV must start with header id,verdict,notes");
        continue;
      }
      if (fields.size() < 2) raise(Errc::MalformedLine, "bad verdict row: " + line);
      if (!known_ids.count(fields[0]))
        raise(Errc::UnknownRecordId, "verdict references unknown record '" + fields[0] + "'");
      verdicts[fields[0]] = {fields[0], fields[1], fields.size() > 2 ? fields[2] : ""};
    }
  }

  write_jsonl(out_path, corpus, [&](const InstructionRecord& rec) {
    json j = to_json(rec);
    if (const auto it = verdicts.find(rec.record_id); it != verdicts.end()) {
      j["review_verdict"] = it->second.verdict;
      if (!it->second.notes.empty()) j["review_notes"] = it->second.notes;
    }
    return j;
  });
  std::cout << "review-merge: " << verdicts.size() << " verdict(s) merged into " << out_path.string()
            << "\n";
  return 0;
}

inline int cmd_evaluate(const fs::path& corpus_path, const fs::path& predictions_path,
                        const evalkit::MetricSelection& selection, const std::string& provider_name,
                        const std::string& model, const fs::path& out_dir) {
  const auto corpus = read_corpus(corpus_path);
  const auto predictions = read_predictions(predictions_path);

  std::unique_ptr<genkit::Provider> judge;
  if (selection.judge && provider_name != "none" && !provider_name.empty())
    judge = detail::make_provider(provider_name, model);

  const evalkit::MetricReport report =
      evalkit::evaluate_predictions(corpus, predictions, selection, judge.get());
  write_text(out_dir / "report.json", report.document.dump(2) + "\n");
  const std::string table = report.table();
  write_text(out_dir / "report.txt", table);
  std::cout << table;
  if (report.had_errors) {
    std::cerr << "evaluate: some metric families failed (see report)\n";
    return 1;
  }
  return 0;
}

}  // namespace pavekit::cli
