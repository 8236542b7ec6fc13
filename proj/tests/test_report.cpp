#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "pavekit/genkit/generate.hpp"
#include "pavekit/genkit/plan.hpp"
#include "pavekit/report/stats.hpp"

using namespace pavekit;
using namespace pavekit::report;

namespace {

InstructionRecord single_turn(const std::string& id, const std::string& dataset,
                              const std::string& answer) {
  InstructionRecord rec;
  rec.record_id = id;
  rec.image_refs = {dataset + "/img.png"};
  rec.task = TaskId::MultiLengthCaption;
  rec.answer_format = AnswerFormat::Descriptive;
  rec.source_dataset = dataset;
  rec.turns = {{Role::User, "Describe the section."}, {Role::Assistant, answer}};
  return rec;
}

InstructionRecord multi_turn(const std::string& id) {
  InstructionRecord rec;
  rec.record_id = id;
  rec.image_refs = {"ds/img.png"};
  rec.task = TaskId::MultiTurnConsultation;
  rec.answer_format = AnswerFormat::Descriptive;
  rec.source_dataset = "ds";
  for (int t = 0; t < 3; ++t) {
    rec.turns.push_back({Role::User, "question " + std::to_string(t)});
    rec.turns.push_back(
        {Role::Assistant, "a longer descriptive reply that covers the recorded conditions fully"});
  }
  return rec;
}

const std::string kCaption =
    "a pavement section with several recorded distress instances across the surface";

}  // namespace

TEST_CASE("compute_stats counts styles, datasets, and formats") {
  std::vector<InstructionRecord> records;
  for (int i = 0; i < 4; ++i)
    records.push_back(single_turn("r" + std::to_string(i), "ds" + std::to_string(i % 2), kCaption));
  records.push_back(multi_turn("m0"));

  const auto stats = compute_stats(records);
  CHECK(stats.records == 5);
  CHECK(stats.multi_turn_fraction == Catch::Approx(0.2));
  CHECK(stats.single_turn_fraction == Catch::Approx(0.8));
  CHECK(stats.per_dataset_counts.at("ds0") == 2);
  CHECK(stats.per_dataset_counts.at("ds1") == 2);
  CHECK(stats.turn_count_histogram.at(1) == 4);
  CHECK(stats.turn_count_histogram.at(3) == 1);
  CHECK(stats.answer_format_fractions.at("descriptive") == Catch::Approx(1.0));
  CHECK(stats.per_category_counts.size() == 5);

  double fraction_sum = 0;
  for (const auto& [_, v] : stats.answer_format_fractions) fraction_sum += v;
  CHECK(fraction_sum == Catch::Approx(1.0).margin(1e-9));

  std::size_t histogram_total = stats.turn_overflow;
  for (const auto& [_, v] : stats.turn_count_histogram) histogram_total += v;
  CHECK(histogram_total == stats.records);
}

TEST_CASE("compute_stats on an empty corpus is all zeros") {
  const auto stats = compute_stats(std::vector<InstructionRecord>{});
  CHECK(stats.records == 0);
  CHECK(stats.multi_turn_fraction == 0.0);
  CHECK(stats.per_dataset_counts.empty());
  CHECK(stats.answer_format_fractions.empty());
  CHECK(stats.per_category_counts.size() == 5);  // schema completeness
}

TEST_CASE("compute_stats is order-insensitive") {
  std::vector<InstructionRecord> records;
  for (int i = 0; i < 20; ++i)
    records.push_back(single_turn("r" + std::to_string(i), "ds" + std::to_string(i % 3), kCaption));
  records.push_back(multi_turn("m0"));

  const auto forward = compute_stats(records);
  std::mt19937_64 rng(5);
  std::shuffle(records.begin(), records.end(), rng);
  CHECK(compute_stats(records) == forward);
}

TEST_CASE("csv rendering round-trips and table lists every category") {
  std::vector<InstructionRecord> records;
  for (int i = 0; i < 7; ++i)
    records.push_back(single_turn("r" + std::to_string(i), "ds", kCaption));
  records.push_back(multi_turn("m0"));
  records[1].ground_truth.boxes = {{"pothole", {1, 2, 3, 4}, std::nullopt}};

  const auto stats = compute_stats(records);
  const std::string csv = render_report(stats, ReportFormat::Csv);
  CHECK(parse_stats_csv(csv) == stats);
  CHECK(render_report(stats, ReportFormat::Csv) == csv);

  const std::string table = render_report(stats, ReportFormat::Table);
  for (const auto category :
       {"spatial_reasoning", "condition_assessment", "professional_workflow", "reasoning_analysis",
        "multi_modal_interaction"})
    CHECK(table.find(category) != std::string::npos);
  CHECK(render_report(stats, ReportFormat::Table) == table);
}

TEST_CASE("stats over a planned corpus report the configured multi-turn fraction") {
  std::vector<UnifiedAnnotation> annotations;
  for (int i = 0; i < 1000; ++i) {
    UnifiedAnnotation a;
    a.image_ref = "ds/img" + std::to_string(i) + ".png";
    a.source_dataset = "ds";
    a.dims = {640, 480};
    a.instances = {{make_box_abs(120, 60, 200, 180), {"pothole", "pothole", "ds"}, Severity::Medium},
                   {make_box_abs(240, 180, 400, 300), {"alligator crack", "alligator crack", "ds"},
                    Severity::High}};
    a.pci = PciScore{55.0};
    a.condition = condition_from_color(ConditionColor::Yellow);
    annotations.push_back(std::move(a));
  }

  genkit::MixConfig mix;
  mix.multi_turn_fraction = 0.206;
  const auto plan = genkit::plan_corpus(annotations, mix);
  const auto& registry = genkit::default_prompt_registry();

  std::vector<InstructionRecord> corpus;
  for (const auto& assignment : plan.assignments) {
    const auto& annotation = annotations[assignment.annotation_index];
    if (assignment.multi_turn) {
      const std::vector<genkit::PromptSpec> prompts = {
          genkit::compose_prompt(TaskId::MultiTurnConsultation, registry)};
      corpus.push_back(genkit::build_multiturn(annotation, assignment.turn_count, prompts, nullptr,
                                               assignment.format));
    } else {
      const UnifiedAnnotation* partner =
          assignment.partner_index ? &annotations[*assignment.partner_index] : nullptr;
      corpus.push_back(genkit::generate_record(annotation, assignment.task, assignment.length,
                                               genkit::compose_prompt(assignment.task, registry),
                                               nullptr, partner));
    }
  }

  const auto stats = compute_stats(corpus);
  CHECK(stats.records == 1000);
  CHECK(stats.multi_turn_fraction == Catch::Approx(0.206).margin(0.001));
  CHECK(stats.answer_format_fractions.at("coordinates") == Catch::Approx(0.31).margin(0.001));

  // a corpus this size exercises every task type at least once
  std::set<TaskId> tasks_seen;
  for (const auto& rec : corpus) tasks_seen.insert(rec.task);
  CHECK(tasks_seen.size() == 32);
  // conversation depth stays within the published 1..8 exchange range
  CHECK(stats.turn_overflow == 0);
  for (const auto& [exchanges, _] : stats.turn_count_histogram) {
    CHECK(exchanges >= 1);
    CHECK(exchanges <= 8);
  }
}

TEST_CASE("turn histogram support stays within 1..8 with an overflow bucket") {
  InstructionRecord rec = multi_turn("deep");
  for (int t = 0; t < 7; ++t) {
    rec.turns.push_back({Role::User, "q"});
    rec.turns.push_back({Role::Assistant, "a"});
  }
  // now 10 exchanges
  const auto stats = compute_stats(std::vector<InstructionRecord>{rec});
  CHECK(stats.turn_overflow == 1);
  CHECK(stats.turn_count_histogram.empty());
}
