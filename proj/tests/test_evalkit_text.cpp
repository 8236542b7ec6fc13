#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "pavekit/evalkit/text.hpp"
#include "pavekit/evalkit/vqa.hpp"

using namespace pavekit;
using namespace pavekit::evalkit;

TEST_CASE("tokenizer separates punctuation but keeps decimals whole") {
  CHECK(tokenize("Hello, world!") == std::vector<std::string>{"hello", ",", "world", "!"});
  CHECK(tokenize("PCI: 41.5 (Poor).") ==
        std::vector<std::string>{"pci", ":", "41.5", "(", "poor", ")", "."});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(word_count("a b  c") == 3);
}

TEST_CASE("levenshtein similarity anchors") {
  CHECK(levenshtein_similarity("abc", "abc") == 1.0);
  CHECK(levenshtein_similarity("", "") == 1.0);
  // kitten -> sitting takes 3 edits; 1 - 3/7
  CHECK(levenshtein_distance("kitten", "sitting") == 3);
  CHECK(levenshtein_similarity("kitten", "sitting") == Catch::Approx(1.0 - 3.0 / 7.0));
  // raw strings: 3 insertions over max length 21
  CHECK(levenshtein_distance("longitudinal crack", "longitudinal cracking") == 3);
  CHECK(levenshtein_similarity("longitudinal crack", "longitudinal cracking") ==
        Catch::Approx(1.0 - 3.0 / 21.0));
  CHECK(levenshtein_similarity("longitudinal crack", "longitudinal cracking") > 0.7);
}

TEST_CASE("field similarity strips whitespace before the edit ratio") {
  // "longitudinalcrack" (17) vs "longitudinalcracking" (20): 1 - 3/20
  CHECK(field_similarity("longitudinal crack", "longitudinal cracking") == 0.85);
  CHECK(field_similarity("Longitudinal Crack", "longitudinal crack") == 1.0);
}

TEST_CASE("levenshtein agrees with the recursive oracle") {
  // exhaustive sweep over short strings on a 3-letter alphabet
  std::vector<std::string> pool = {""};
  const std::string alphabet = "abc";
  std::vector<std::string> frontier = pool;
  for (int len = 1; len <= 3; ++len) {
    std::vector<std::string> next;
    for (const auto& s : frontier)
      for (char c : alphabet) next.push_back(s + c);
    pool.insert(pool.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const auto& a : pool)
    for (const auto& b : pool)
      REQUIRE(levenshtein_distance(a, b) == oracles::lev_recursive(a, b));

  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> len(0, 8), ch(0, 3);
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (int k = len(rng); k > 0; --k) a += static_cast<char>('a' + ch(rng));
    for (int k = len(rng); k > 0; --k) b += static_cast<char>('a' + ch(rng));
    REQUIRE(levenshtein_distance(a, b) == oracles::lev_recursive(a, b));
  }
}

TEST_CASE("field matching follows the per-field strategy") {
  CHECK(field_match("Medium", "medium", StructuredField::Severity));
  CHECK(field_match(" MEDIUM ", "medium", StructuredField::Severity));
  CHECK_FALSE(field_match("Medium", "High", StructuredField::Severity));
  CHECK(field_match("longitudinal crack", "longitudinal cracking", StructuredField::Distress));
  CHECK_FALSE(field_match("pothole", "manhole", StructuredField::Distress));
}

TEST_CASE("vqa normalization and matching") {
  CHECK(normalize_answer("Yes.") == "yes");
  CHECK(normalize_answer("The pothole, a large one!") == "pothole large one");
  CHECK(vqa_exact_match("Yes.", "yes"));
  CHECK_FALSE(vqa_exact_match("yes", "no"));

  // containment clause after normalization
  CHECK(vqa_relaxed_match("yes, severe alligator cracking", "yes"));
  // similarity 1 - 3/7 = 0.571 < 0.8 and no containment either way
  CHECK(levenshtein_distance("pothole", "manhole") == 3);
  CHECK_FALSE(vqa_relaxed_match("pothole", "manhole"));
  CHECK_FALSE(vqa_exact_match("pothole", "manhole"));
}

TEST_CASE("vqa_accuracy aggregates over the ground-truth set") {
  const std::map<std::string, std::string> gts = {{"r1", "yes"}, {"r2", "no"}, {"r3", "Fair"}};
  const std::map<std::string, std::string> preds = {
      {"r1", "Yes."}, {"r2", "yes"}, {"r3", "fair"}};
  const auto acc = vqa_accuracy(preds, gts);
  CHECK(acc.exact == Catch::Approx(2.0 / 3.0));
  CHECK(acc.relaxed == Catch::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(vqa_accuracy({{"unknown", "x"}}, gts), Error);
}

TEST_CASE("field_accuracy counts fuzzy hits over ground truth") {
  const std::map<std::string, std::string> gts = {{"a", "longitudinal crack"},
                                                  {"b", "pothole"}};
  const std::map<std::string, std::string> preds = {{"a", "longitudinal cracking"},
                                                    {"b", "manhole"}};
  CHECK(field_accuracy(preds, gts, StructuredField::Distress) == Catch::Approx(0.5));
}
