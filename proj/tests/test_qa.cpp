#include <catch2/catch_amalgamated.hpp>

#include "pavekit/genkit/generate.hpp"
#include "pavekit/qa/review.hpp"
#include "pavekit/qa/validate.hpp"

using namespace pavekit;
using namespace pavekit::qa;

namespace {

InstructionRecord pci_record(const std::string& value) {
  InstructionRecord rec;
  rec.record_id = "rec-pci";
  rec.image_refs = {"dsps24/images/p1.png"};
  rec.task = TaskId::PciAssessment;
  rec.answer_format = AnswerFormat::Numeric;
  rec.turns = {{Role::User, "Estimate the PCI for this section."},
               {Role::Assistant, "PCI: " + value + " (Poor)."}};
  rec.ground_truth.dims = ImageDims{640, 480};
  rec.ground_truth.pci = 41.0;
  return rec;
}

InstructionRecord grounding_record(const std::string& box_text) {
  InstructionRecord rec;
  rec.record_id = "rec-grounding";
  rec.image_refs = {"rdd2022/images/a.png"};
  rec.task = TaskId::SingleObjectGrounding;
  rec.answer_format = AnswerFormat::Coordinates;
  rec.turns = {{Role::User, "Locate the pothole and return its bounding box."},
               {Role::Assistant, box_text}};
  rec.ground_truth.dims = ImageDims{640, 480};
  rec.ground_truth.boxes = {{"pothole", {120, 60, 200, 180}, std::nullopt}};
  return rec;
}

}  // namespace

TEST_CASE("validate_record passes well-formed records") {
  const auto report = validate_record(pci_record("41"));
  CHECK(report.pass);
  CHECK(report.failures.empty());
  CHECK(report.checks_run >= 5);
}

TEST_CASE("pci range violations are flagged with the registered code") {
  const auto report = validate_record(pci_record("105"));
  REQUIRE_FALSE(report.pass);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].first == "PciOutOfRange");
}

TEST_CASE("coordinate answers outside the image are flagged") {
  const auto report = validate_record(grounding_record("[120, 60, 700, 180]"));
  REQUIRE_FALSE(report.pass);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].first == "BoxOutOfImage");
}

TEST_CASE("coordinate answers are cross-checked against the source annotation") {
  UnifiedAnnotation annotation;
  annotation.image_ref = "rdd2022/images/a.png";
  annotation.dims = {640, 480};
  annotation.instances = {{make_box_abs(120, 60, 200, 180), {"pothole", "D40", "rdd2022"},
                           std::nullopt}};

  CHECK(validate_record(grounding_record("[120, 60, 200, 180]"), &annotation).pass);

  const auto shifted = validate_record(grounding_record("[160, 60, 240, 180]"), &annotation);
  REQUIRE_FALSE(shifted.pass);
  CHECK(shifted.failures[0].first == "BoxMismatch");
}

TEST_CASE("turn structure violations are flagged") {
  auto rec = pci_record("41");
  rec.turns.push_back({Role::User, "extra dangling question"});
  CHECK_FALSE(validate_record(rec).pass);

  auto swapped = pci_record("41");
  std::swap(swapped.turns[0], swapped.turns[1]);
  CHECK_FALSE(validate_record(swapped).pass);

  auto empty_turn = pci_record("41");
  empty_turn.turns[1].text.clear();
  const auto report = validate_record(empty_turn);
  CHECK_FALSE(report.pass);
}

TEST_CASE("multiple image refs are only allowed on comparison tasks") {
  auto rec = pci_record("41");
  rec.image_refs.push_back("second.png");
  const auto report = validate_record(rec);
  REQUIRE_FALSE(report.pass);
  CHECK(report.failures[0].first == "ImageRefCount");

  auto none = pci_record("41");
  none.image_refs.clear();
  CHECK_FALSE(validate_record(none).pass);
}

TEST_CASE("severity and distress mentions are screened against the lexicon") {
  InstructionRecord rec;
  rec.record_id = "rec-sev";
  rec.image_refs = {"x.png"};
  rec.task = TaskId::SeverityClassification;
  rec.answer_format = AnswerFormat::ShortAnswer;
  rec.turns = {{Role::User, "Classify the severity."}, {Role::Assistant, "Severity: Extreme"}};
  const auto report = validate_record(rec);
  REQUIRE_FALSE(report.pass);
  CHECK(report.failures[0].first == "UnknownSeverity");
}

TEST_CASE("all emitted failure codes are documented in the registry") {
  const std::vector<InstructionRecord> bad = {
      pci_record("105"),
      grounding_record("[120, 60, 700, 180]"),
      grounding_record("no box here"),
  };
  for (const auto& rec : bad) {
    const auto report = validate_record(rec);
    for (const auto& [code, _] : report.failures)
      CHECK(failure_code_registry().count(code) == 1);
  }
}

TEST_CASE("validate_corpus aggregates pass rates deterministically") {
  std::vector<InstructionRecord> records;
  for (int i = 0; i < 9; ++i) {
    auto rec = pci_record("41");
    rec.record_id = "rec-" + std::to_string(i);
    records.push_back(std::move(rec));
  }
  auto bad = pci_record("105");
  bad.record_id = "rec-bad";
  records.push_back(bad);

  const auto summary = validate_corpus(records);
  CHECK(summary.records == 10);
  REQUIRE(summary.pass_rate.has_value());
  CHECK(*summary.pass_rate == Catch::Approx(0.9));
  CHECK(summary.failure_histogram.at("PciOutOfRange") == 1);

  // pass rate is invariant under reordering
  std::reverse(records.begin(), records.end());
  const auto reversed = validate_corpus(records);
  CHECK(reversed.pass_rate == summary.pass_rate);

  const auto empty = validate_corpus(std::vector<InstructionRecord>{});
  CHECK_FALSE(empty.pass_rate.has_value());
}

TEST_CASE("review sampling is capped, seeded, and warns on undersupply") {
  std::vector<InstructionRecord> records;
  for (int i = 0; i < 12; ++i) {
    auto rec = pci_record("41");
    rec.record_id = "rec-" + std::to_string(i);
    records.push_back(std::move(rec));
  }
  for (int i = 0; i < 2; ++i) {
    auto rec = grounding_record("[120, 60, 200, 180]");
    rec.record_id = "rec-g" + std::to_string(i);
    records.push_back(std::move(rec));
  }

  const auto sample = sample_for_review(records, 5, 7);
  // two strata: (condition_assessment, numeric) capped at 5, (spatial, coordinates) has 2
  CHECK(sample.indices.size() == 7);
  REQUIRE(sample.warnings.size() == 1);
  CHECK(sample.warnings[0].find("2 record(s)") != std::string::npos);

  const auto again = sample_for_review(records, 5, 7);
  CHECK(sample.indices == again.indices);

  const auto different = sample_for_review(records, 5, 8);
  CHECK(different.indices.size() == 7);

  CHECK_THROWS_AS(sample_for_review(records, 0, 7), Error);
}

TEST_CASE("review sheets contain the conversation and metadata") {
  const auto rec = pci_record("41");
  const std::string sheet = render_review_sheet(rec);
  CHECK(sheet.find("rec-pci") != std::string::npos);
  CHECK(sheet.find("pci_assessment") != std::string::npos);
  CHECK(sheet.find("**User:**") != std::string::npos);
  CHECK(sheet.find("PCI: 41") != std::string::npos);
}
