#include <catch2/catch_amalgamated.hpp>

#include "pavekit/core/labels.hpp"
#include "pavekit/core/taxonomy.hpp"
#include "pavekit/core/types.hpp"

using namespace pavekit;

TEST_CASE("taxonomy has 32 tasks with the published category cardinalities") {
  const auto& tasks = taxonomy();
  REQUIRE(tasks.size() == 32);

  std::map<TaskCategory, int> counts;
  for (const auto& t : tasks) ++counts[t.category];
  CHECK(counts[TaskCategory::SpatialReasoning] == 9);
  CHECK(counts[TaskCategory::ConditionAssessment] == 7);
  CHECK(counts[TaskCategory::ProfessionalWorkflow] == 6);
  CHECK(counts[TaskCategory::ReasoningAnalysis] == 6);
  CHECK(counts[TaskCategory::MultiModalInteraction] == 4);
}

TEST_CASE("taxonomy order is stable and names round-trip") {
  const auto& first = taxonomy();
  const auto& second = taxonomy();
  REQUIRE(first.size() == second.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].id == second[i].id);
    const auto name = to_string(first[i].id);
    names.insert(std::string(name));
    const auto parsed = task_from_string(name);
    REQUIRE(parsed.has_value());
    CHECK(*parsed == first[i].id);
  }
  CHECK(names.size() == 32);
}

TEST_CASE("condition color mapping is the fixed bijection") {
  CHECK(condition_from_color(ConditionColor::Green).label == ConditionLabel::Good);
  CHECK(condition_from_color(ConditionColor::Blue).label == ConditionLabel::Fair);
  CHECK(condition_from_color(ConditionColor::Yellow).label == ConditionLabel::Poor);
  CHECK(condition_from_color(ConditionColor::Red).label == ConditionLabel::Failed);

  std::set<ConditionLabel> labels;
  for (auto c : {ConditionColor::Green, ConditionColor::Blue, ConditionColor::Yellow,
                 ConditionColor::Red})
    labels.insert(condition_label_of(c));
  CHECK(labels.size() == 4);
}

TEST_CASE("pci ranges partition 0..100 with no gap or overlap") {
  CHECK(pci_range_of(ConditionLabel::Good) == PciRange{70, 100});
  CHECK(pci_range_of(ConditionLabel::Fair) == PciRange{50, 69});
  CHECK(pci_range_of(ConditionLabel::Poor) == PciRange{25, 49});
  CHECK(pci_range_of(ConditionLabel::Failed) == PciRange{0, 24});

  for (int v = 0; v <= 100; ++v) {
    int holders = 0;
    for (auto l : {ConditionLabel::Good, ConditionLabel::Fair, ConditionLabel::Poor,
                   ConditionLabel::Failed})
      if (pci_range_of(l).contains(v)) ++holders;
    CHECK(holders == 1);
  }
}

TEST_CASE("canonicalize_label resolves aliases and identity labels") {
  const auto rdd = canonicalize_label("D00", "rdd2022");
  CHECK(rdd.canonical_label == "longitudinal crack");
  CHECK(rdd.source_label == "D00");
  CHECK(rdd.source_dataset == "rdd2022");

  CHECK(canonicalize_label("longitudinal crack", "pid").canonical_label == "longitudinal crack");
  CHECK(canonicalize_label("Longitudinal Cracks", "pid").canonical_label == "longitudinal crack");
  CHECK(canonicalize_label("manhole cover", "svrdd").canonical_label == "manhole");

  CHECK_THROWS_MATCHES(canonicalize_label("frog", "pid"), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::UnknownLabel; }));
  CHECK_THROWS_AS(canonicalize_label("pothole", "unregistered_ds"), Error);
}

TEST_CASE("canonicalize_label is deterministic and idempotent on canonical labels") {
  const auto& table = AliasTable::builtin();
  for (const auto& label : table.vocabulary()) {
    const auto once = table.canonicalize(label, "rdd2022");
    const auto twice = table.canonicalize(once.canonical_label, "rdd2022");
    CHECK(once.canonical_label == twice.canonical_label);
    CHECK(table.is_canonical(once.canonical_label));
  }
}

TEST_CASE("box and dims invariants are enforced") {
  CHECK_THROWS_AS(make_dims(0, 10), Error);
  CHECK_THROWS_AS(make_dims(10, -1), Error);
  CHECK(make_dims(1, 1) == ImageDims{1, 1});

  CHECK_THROWS_AS(make_box_norm(1.2, 0.5, 0.1, 0.1), Error);
  CHECK_THROWS_AS(make_box_norm(0.9, 0.5, 0.5, 0.1), Error);  // extends past the right edge
  CHECK_NOTHROW(make_box_norm(0.5, 0.5, 1.0, 1.0));
  CHECK_NOTHROW(make_box_norm(1.0, 0.5, 0.0, 0.2));

  CHECK_THROWS_AS(make_box_abs(10, 0, 5, 10), Error);
  CHECK_THROWS_AS(make_box_abs(-1, 0, 5, 10), Error);
  CHECK(make_box_abs(0, 0, 5, 10).area() == 50.0);

  CHECK_THROWS_AS(make_pci(100.5), Error);
  CHECK_THROWS_AS(make_pci(-0.1), Error);
  CHECK(make_pci(62.5).value == 62.5);
}

TEST_CASE("record ids are content-addressed") {
  InstructionRecord rec;
  rec.image_refs = {"ds/images/a.png"};
  rec.task = TaskId::SingleObjectGrounding;
  rec.length = LengthVariant::Short;
  rec.turns = {{Role::User, "Locate the pothole."}, {Role::Assistant, "[1, 2, 3, 4]"}};

  const auto id1 = compute_record_id(rec);
  const auto id2 = compute_record_id(rec);
  CHECK(id1 == id2);
  CHECK(id1.rfind("rec-", 0) == 0);

  rec.turns[1].text = "[1, 2, 3, 5]";
  CHECK(compute_record_id(rec) != id1);
}
