#pragma once

#include <chrono>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "pavekit/core/types.hpp"
#include "pavekit/error.hpp"

namespace pavekit::genkit {

struct ProviderRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.2;
  int max_tokens = 1024;
};

struct ProviderResponse {
  std::string text;
  std::string finish_reason = "stop";
  double latency_ms = 0;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse complete(const ProviderRequest& request) = 0;
  virtual std::string_view name() const = 0;
};

// Prompt sections the deterministic mock keys on.
inline constexpr std::string_view kReferenceAnswerMarker = "REFERENCE ANSWER (preserve all factual content):";
inline constexpr std::string_view kJudgeRubricMarker = "EVALUATION RUBRIC";

// Offline stand-in for the generation engine. Replies are a pure function of
// the request: generation prompts echo their reference-answer section, judge
// prompts get a parseable rubric reply with hash-derived (or scripted) scores.
class MockProvider : public Provider {
 public:
  MockProvider() = default;

  explicit MockProvider(double fixed_judge_score) : fixed_judge_score_(fixed_judge_score) {}

  void script_judge_scores(std::deque<double> scores) { scripted_scores_ = std::move(scores); }

  ProviderResponse complete(const ProviderRequest& request) override {
    if (request.user_prompt.find(kJudgeRubricMarker) != std::string::npos ||
        request.system_prompt.find(kJudgeRubricMarker) != std::string::npos)
      return {judge_reply(request), "stop", 0};

    const auto pos = request.user_prompt.find(kReferenceAnswerMarker);
    if (pos != std::string::npos) {
      std::string text = request.user_prompt.substr(pos + kReferenceAnswerMarker.size());
      while (!text.empty() && (text.front() == '\n' || text.front() == ' ')) text.erase(text.begin());
      while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
      return {std::move(text), "stop", 0};
    }

    return {canned_sentence(request), "stop", 0};
  }

  std::string_view name() const override { return "mock"; }

 private:
  std::string judge_reply(const ProviderRequest& request) {
    double score;
    std::lock_guard lock(mutex_);
    if (!scripted_scores_.empty()) {
      score = scripted_scores_.front();
      scripted_scores_.pop_front();
    } else if (fixed_judge_score_) {
      score = *fixed_judge_score_;
    } else {
      const auto h = pavekit::detail::fnv1a64(request.user_prompt);
      score = 6.0 + static_cast<double>(h % 5);  // 6..10
    }
    nlohmann::json reply = {
        {"score", score},
        {"dimensions",
         {{"factual_accuracy", score},
          {"logical_coherence", score},
          {"technical_terminology", score},
          {"evidence_grounding", score},
          {"completeness", score}}},
        {"justification", "deterministic mock evaluation"}};
    return reply.dump();
  }

  std::string canned_sentence(const ProviderRequest& request) const {
    static const char* const lines[] = {
        "The pavement surface shows the reported distress conditions.",
        "Observed distresses are consistent with the provided annotation data.",
        "The section exhibits the documented condition characteristics.",
    };
    return lines[pavekit::detail::fnv1a64(request.user_prompt) % 3];
  }

  std::optional<double> fixed_judge_score_;
  std::deque<double> scripted_scores_;
  std::mutex mutex_;
};

struct RemoteConfig {
  std::string url;       // e.g. http://localhost:8000/v1/chat/completions
  std::string api_key;   // sent as Bearer token when non-empty
  std::string model = "default";
  int attempts = 3;
  std::chrono::milliseconds base_backoff{250};
};

// Chat-completion style endpoint over plain HTTP. Declared here; defined in
// provider_http.hpp to keep the HTTP dependency out of metric-only builds.
class RemoteProvider;

inline ProviderResponse complete_with_retries(Provider& provider, const ProviderRequest& request,
                                              int attempts = 3,
                                              std::chrono::milliseconds base_backoff =
                                                  std::chrono::milliseconds(250)) {
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    try {
      return provider.complete(request);
    } catch (const Error& e) {
      if (e.code() != Errc::ProviderError) throw;
      last_error = e.what();
      if (attempt + 1 < attempts) std::this_thread::sleep_for(base_backoff * (1 << attempt));
    }
  }
  raise(Errc::ProviderError, "all " + std::to_string(attempts) + " attempts failed: " + last_error);
}

}  // namespace pavekit::genkit
