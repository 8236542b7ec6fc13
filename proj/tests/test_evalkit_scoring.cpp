#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pavekit/evalkit/judge.hpp"
#include "pavekit/evalkit/predictions.hpp"
#include "pavekit/evalkit/regression.hpp"

using namespace pavekit;
using namespace pavekit::evalkit;

TEST_CASE("regression anchors") {
  const auto perfect = regression_scores({50, 60, 70}, {50, 60, 70});
  CHECK(perfect.mae == 0.0);
  CHECK(perfect.mse == 0.0);
  CHECK(perfect.rmse == 0.0);
  REQUIRE(perfect.r2.has_value());
  CHECK(*perfect.r2 == Catch::Approx(1.0));

  // errors +10 and -10
  const auto shifted = regression_scores({50, 60}, {40, 70});
  CHECK(shifted.mae == Catch::Approx(10.0));
  CHECK(shifted.mse == Catch::Approx(100.0));
  CHECK(shifted.rmse == Catch::Approx(10.0));

  // constant predictor at the ground-truth mean has R^2 = 0
  const auto constant = regression_scores({55, 55}, {40, 70});
  REQUIRE(constant.r2.has_value());
  CHECK(*constant.r2 == Catch::Approx(0.0));

  // no ground-truth variance: R^2 undefined
  CHECK_FALSE(regression_scores({40, 41}, {50, 50}).r2.has_value());

  CHECK_THROWS_AS(regression_scores({1, 2}, {1}), Error);
  CHECK_THROWS_AS(regression_scores({}, {}), Error);
}

TEST_CASE("regression invariants over random vectors") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(0, 100);
  std::uniform_int_distribution<int> size(1, 40);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = size(rng);
    std::vector<double> preds(n), gts(n);
    for (int i = 0; i < n; ++i) {
      preds[i] = value(rng);
      gts[i] = value(rng);
    }
    const auto s = regression_scores(preds, gts);
    REQUIRE(s.mae <= s.rmse + 1e-12);
    REQUIRE(std::abs(s.rmse * s.rmse - s.mse) < 1e-12);
  }
}

TEST_CASE("judge_score parses rubric replies and applies the pass threshold") {
  genkit::MockProvider pass_judge(8.0);
  const auto good = judge_score("why?", "because of fatigue cracking", "fatigue", pass_judge);
  CHECK(good.score == 8.0);
  CHECK(good.pass);
  for (const double d : good.dimension_scores) CHECK(d == 8.0);

  genkit::MockProvider fail_judge(6.0);
  const auto poor = judge_score("why?", "unclear", "fatigue", fail_judge);
  CHECK(poor.score == 6.0);
  CHECK_FALSE(poor.pass);
}

TEST_CASE("judge summary aggregates scores and pass rate") {
  genkit::MockProvider judge;
  judge.script_judge_scores({8.0, 6.0});
  std::vector<JudgeResult> results;
  results.push_back(judge_score("q1", "p1", "g1", judge));
  results.push_back(judge_score("q2", "p2", "g2", judge));
  const auto summary = summarize_judgements(results);
  CHECK(summary.mean_score == Catch::Approx(7.0));
  CHECK(summary.pass_rate == Catch::Approx(0.5));
  CHECK(summary.count == 2);
}

TEST_CASE("unparseable judge replies raise after retries") {
  struct GarbageProvider : genkit::Provider {
    int calls = 0;
    genkit::ProviderResponse complete(const genkit::ProviderRequest&) override {
      ++calls;
      return {"no json here", "stop", 0};
    }
    std::string_view name() const override { return "garbage"; }
  } garbage;

  CHECK_THROWS_MATCHES(judge_score("q", "p", "g", garbage), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::JudgeParseError; }));
  CHECK(garbage.calls == 3);  // initial attempt plus two retries
}

TEST_CASE("prediction grammar extracts boxes, fields, pci, choices, checklists") {
  const auto p = parse_prediction(
      "Distress: alligator crack\nSeverity: Medium\n"
      "The boxes are [10, 20, 110, 220] and [5,5,50,50].\n"
      "- section: a.png\n- instance count: 2\n"
      "Estimated PCI: 41 (Poor). Choose (b) for the next step.");
  REQUIRE(p.boxes.size() == 2);
  CHECK(p.boxes[0] == std::array<long long, 4>{10, 20, 110, 220});
  CHECK(p.fields.at("distress") == "alligator crack");
  CHECK(p.fields.at("severity") == "Medium");
  REQUIRE(p.pci.has_value());
  CHECK(*p.pci == 41.0);
  REQUIRE(p.choice.has_value());
  CHECK(*p.choice == 'b');
  REQUIRE(p.checklist.size() == 2);
  CHECK(p.checklist[0] == std::pair<std::string, std::string>{"section", "a.png"});
}

TEST_CASE("pci extraction requires a PCI context") {
  CHECK_FALSE(extract_pci("the crack is 41 pixels wide").has_value());
  CHECK(extract_pci("PCI: 62.5").value() == 62.5);
  CHECK(extract_pci("the pci value is 17") == 17.0);
  CHECK_FALSE(extract_pci("suspicious word: pcixyz 9").has_value());
}

TEST_CASE("answer format classification follows the documented precedence") {
  CHECK(classify_answer_format("- section: x\n- count: 2") == AnswerFormat::Checklist);
  CHECK(classify_answer_format("(c) the alligator crack in the upper-left region.") ==
        AnswerFormat::MultipleChoice);
  CHECK(classify_answer_format("[120, 60, 200, 180]") == AnswerFormat::Coordinates);
  CHECK(classify_answer_format(
            "Step 1: Review the data. Step 2: The PCI of 41 sits in the Poor band.") ==
        AnswerFormat::ChainOfThought);
  CHECK(classify_answer_format("PCI: 41 (Poor).") == AnswerFormat::Numeric);
  CHECK(classify_answer_format("Severity: Medium") == AnswerFormat::ShortAnswer);
  CHECK(classify_answer_format("The pavement surface shows a long transverse crack "
                               "near the northern edge of the section.") ==
        AnswerFormat::Descriptive);
}

TEST_CASE("parsing_rate counts records whose required fields extract") {
  std::vector<PredictionRecord> preds;
  std::map<std::string, AnswerFormat> formats;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "r" + std::to_string(i);
    formats[id] = AnswerFormat::Coordinates;
    preds.push_back({id, i < 5 ? "[1, 2, 3, 4]" : "no box in this answer"});
  }
  CHECK(parsing_rate(preds, formats) == Catch::Approx(0.5));

  preds.resize(5);
  CHECK(parsing_rate(preds, formats) == 1.0);

  CHECK_THROWS_MATCHES(parsing_rate({}, formats), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::EmptyPredictionSet;
                       }));
  CHECK_THROWS_AS(parsing_rate({{"missing", "x"}}, formats), Error);
}

TEST_CASE("parses_for demands the fields each format needs") {
  CHECK(parses_for(parse_prediction("[1, 2, 3, 4]"), AnswerFormat::Coordinates));
  CHECK_FALSE(parses_for(parse_prediction("no boxes at all"), AnswerFormat::Coordinates));
  CHECK(parses_for(parse_prediction("PCI: 55"), AnswerFormat::Numeric));
  CHECK_FALSE(parses_for(parse_prediction("score unknown"), AnswerFormat::Numeric));
  CHECK(parses_for(parse_prediction("(a) it is"), AnswerFormat::MultipleChoice));
  CHECK(parses_for(parse_prediction("- item: value"), AnswerFormat::Checklist));
  CHECK(parses_for(parse_prediction("anything"), AnswerFormat::Descriptive));
  CHECK_FALSE(parses_for(parse_prediction("   "), AnswerFormat::Descriptive));
}
