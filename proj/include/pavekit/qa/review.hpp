#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pavekit/core/types.hpp"
#include "pavekit/error.hpp"

namespace pavekit::qa {

struct ReviewSample {
  std::vector<std::size_t> indices;  // into the input record list
  std::vector<std::string> warnings;
};

// Stratified by (task category x answer format); seeded and deterministic.
// Strata with fewer records than requested contribute everything they have,
// with a non-fatal warning.
inline ReviewSample sample_for_review(const std::vector<InstructionRecord>& records,
                                      std::size_t per_stratum, std::uint64_t seed) {
  if (per_stratum < 1) raise(Errc::InvalidArgument, "per_stratum must be >= 1");

  std::map<std::pair<TaskCategory, AnswerFormat>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < records.size(); ++i)
    strata[{category_of(records[i].task), records[i].answer_format}].push_back(i);

  ReviewSample out;
  for (auto& [key, members] : strata) {
    std::mt19937_64 rng(seed ^ pavekit::detail::fnv1a64(std::string(to_string(key.first)) + "/" +
                                                        std::string(to_string(key.second))));
    std::shuffle(members.begin(), members.end(), rng);
    if (members.size() < per_stratum)
      out.warnings.push_back("stratum " + std::string(to_string(key.first)) + "/" +
                             std::string(to_string(key.second)) + " has only " +
                             std::to_string(members.size()) + " record(s)");
    const std::size_t take = std::min(per_stratum, members.size());
    for (std::size_t k = 0; k < take; ++k) out.indices.push_back(members[k]);
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

// One human-readable sheet per sampled record.
inline std::string render_review_sheet(const InstructionRecord& rec) {
  std::string out;
  out += "# Review sample " + rec.record_id + "\n\n";
  out += "- task: " + std::string(to_string(rec.task)) + "\n";
  out += "- category: " + std::string(to_string(category_of(rec.task))) + "\n";
  out += "- answer format: " + std::string(to_string(rec.answer_format)) + "\n";
  out += "- length: " + std::string(to_string(rec.length)) + "\n";
  out += "- source dataset: " + rec.source_dataset + "\n";
  for (const auto& ref : rec.image_refs) out += "- image: " + ref + "\n";
  out += "\n## Conversation\n\n";
  for (const auto& turn : rec.turns) {
    out += turn.role == Role::User ? "**User:** " : "**Assistant:** ";
    out += turn.text + "\n\n";
  }
  out += "## Verdict\n\nMark accept or reject in the verdicts CSV (id,verdict,notes).\n";
  return out;
}

struct ReviewVerdict {
  std::string record_id;
  std::string verdict;  // accept | reject
  std::string notes;
};

}  // namespace pavekit::qa
