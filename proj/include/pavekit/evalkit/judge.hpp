#pragma once

#include <array>
#include <string>

#include <json.hpp>

#include "pavekit/genkit/provider.hpp"

namespace pavekit::evalkit {

inline constexpr std::string_view kJudgeRubricVersion = "rubric-v1";

inline constexpr std::array<std::string_view, 5> kJudgeDimensions = {
    "factual_accuracy", "logical_coherence", "technical_terminology", "evidence_grounding",
    "completeness"};

struct JudgeResult {
  double score = 0;                          // overall, 1..10
  std::array<double, 5> dimension_scores{};  // same order as kJudgeDimensions
  bool pass = false;                         // score >= 7
};

inline std::string judge_rubric_prompt() {
  return std::string(genkit::kJudgeRubricMarker) + " (" + std::string(kJudgeRubricVersion) + ")\n" +
         "You are grading a pavement-engineering answer against its reference.\n"
         "Score the prediction from 1 (unusable) to 10 (expert grade) overall, and score each "
         "dimension on the same scale:\n"
         "1. factual_accuracy - technical claims match the reference and annotation data\n"
         "2. logical_coherence - the reasoning chain is internally consistent\n"
         "3. technical_terminology - distress and severity terms follow standard usage\n"
         "4. evidence_grounding - statements cite observable or recorded evidence\n"
         "5. completeness - the answer covers everything the question asks\n"
         "Reply with JSON only: {\"score\": <1-10>, \"dimensions\": {\"factual_accuracy\": <1-10>, "
         "\"logical_coherence\": <1-10>, \"technical_terminology\": <1-10>, "
         "\"evidence_grounding\": <1-10>, \"completeness\": <1-10>}, \"justification\": \"...\"}";
}

namespace detail {

inline std::optional<JudgeResult> parse_judge_reply(const std::string& reply) {
  // tolerate prose around the JSON object
  const auto open = reply.find('{');
  const auto close = reply.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close <= open) return std::nullopt;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(reply.substr(open, close - open + 1));
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!doc.contains("score") || !doc["score"].is_number()) return std::nullopt;
  JudgeResult out;
  out.score = doc["score"].get<double>();
  if (!(out.score >= 1.0 && out.score <= 10.0)) return std::nullopt;
  for (std::size_t d = 0; d < kJudgeDimensions.size(); ++d) {
    double v = out.score;
    if (doc.contains("dimensions") && doc["dimensions"].is_object()) {
      const auto& dims = doc["dimensions"];
      const std::string key(kJudgeDimensions[d]);
      if (dims.contains(key) && dims[key].is_number()) v = dims[key].get<double>();
    }
    if (!(v >= 1.0 && v <= 10.0)) return std::nullopt;
    out.dimension_scores[d] = v;
  }
  out.pass = out.score >= 7.0;
  return out;
}

}  // namespace detail

// Rubric-based scoring of one prediction. The reply must parse within the
// initial attempt plus two retries.
inline JudgeResult judge_score(const std::string& question, const std::string& prediction,
                               const std::string& ground_truth, genkit::Provider& judge_provider) {
  genkit::ProviderRequest req;
  req.system_prompt = judge_rubric_prompt();
  req.user_prompt = std::string(genkit::kJudgeRubricMarker) + "\nQUESTION:\n" + question +
                    "\n\nREFERENCE ANSWER:\n" + ground_truth + "\n\nPREDICTION:\n" + prediction;
  req.temperature = 0.0;

  for (int attempt = 0; attempt < 3; ++attempt) {
    const auto response = genkit::complete_with_retries(judge_provider, req);
    if (auto result = detail::parse_judge_reply(response.text)) return *result;
  }
  raise(Errc::JudgeParseError, "judge reply did not parse after 2 retries");
}

struct JudgeSummary {
  double mean_score = 0;
  double pass_rate = 0;
  std::array<double, 5> mean_dimensions{};
  std::size_t count = 0;
};

inline JudgeSummary summarize_judgements(const std::vector<JudgeResult>& results) {
  JudgeSummary s;
  s.count = results.size();
  if (results.empty()) return s;
  std::size_t passes = 0;
  for (const auto& r : results) {
    s.mean_score += r.score;
    for (std::size_t d = 0; d < r.dimension_scores.size(); ++d)
      s.mean_dimensions[d] += r.dimension_scores[d];
    if (r.pass) ++passes;
  }
  s.mean_score /= static_cast<double>(results.size());
  for (auto& v : s.mean_dimensions) v /= static_cast<double>(results.size());
  s.pass_rate = static_cast<double>(passes) / static_cast<double>(results.size());
  return s;
}

}  // namespace pavekit::evalkit
