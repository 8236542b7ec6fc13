#pragma once

#include <map>
#include <string>
#include <vector>

#include "pavekit/evalkit/text.hpp"

namespace pavekit::evalkit {

struct VqaAccuracy {
  double exact = 0;
  double relaxed = 0;
  std::size_t count = 0;
};

namespace detail {

inline bool contains(const std::string& hay, const std::string& needle) {
  return !needle.empty() && hay.find(needle) != std::string::npos;
}

}  // namespace detail

inline bool vqa_exact_match(std::string_view pred, std::string_view gt) {
  return normalize_answer(pred) == normalize_answer(gt);
}

// Relaxed match: high fuzzy similarity or substring containment, both after
// normalization.
inline bool vqa_relaxed_match(std::string_view pred, std::string_view gt) {
  const std::string p = normalize_answer(pred), g = normalize_answer(gt);
  if (p == g) return true;
  if (levenshtein_similarity(p, g) > 0.8) return true;
  return detail::contains(p, g) || detail::contains(g, p);
}

// preds keyed by record id; every prediction must pair with a ground truth.
// Ground-truth entries without a prediction count as misses.
inline VqaAccuracy vqa_accuracy(const std::map<std::string, std::string>& preds,
                                const std::map<std::string, std::string>& gts) {
  for (const auto& [id, _] : preds)
    if (!gts.count(id)) raise(Errc::UnpairedRecord, "prediction '" + id + "' has no ground truth");
  if (gts.empty()) raise(Errc::EmptyInput, "no ground-truth answers");

  VqaAccuracy acc;
  acc.count = gts.size();
  std::size_t exact = 0, relaxed = 0;
  for (const auto& [id, gt] : gts) {
    const auto it = preds.find(id);
    if (it == preds.end()) continue;
    if (vqa_exact_match(it->second, gt)) ++exact;
    if (vqa_relaxed_match(it->second, gt)) ++relaxed;
  }
  acc.exact = static_cast<double>(exact) / static_cast<double>(gts.size());
  acc.relaxed = static_cast<double>(relaxed) / static_cast<double>(gts.size());
  return acc;
}

enum class StructuredField { Distress, Severity, Repair };

inline std::string_view to_string(StructuredField f) {
  switch (f) {
    case StructuredField::Distress: return "distress";
    case StructuredField::Severity: return "severity";
    case StructuredField::Repair: return "repair";
  }
  return "?";
}

// Fuzzy similarity for field labels: normalization (lowercase, whitespace
// removed) precedes the edit-distance ratio, so spacing never counts as an
// edit. normalize("longitudinal crack") vs normalize("longitudinal cracking")
// gives 1 - 3/20 = 0.85.
inline double field_similarity(std::string_view pred, std::string_view gt) {
  return levenshtein_similarity(normalize_compact(pred), normalize_compact(gt));
}

// Severity demands exact equality after compacting; distress and repair use
// fuzzy similarity above 0.7.
inline bool field_match(std::string_view pred, std::string_view gt, StructuredField field) {
  if (field == StructuredField::Severity) return normalize_compact(pred) == normalize_compact(gt);
  return field_similarity(pred, gt) > 0.7;
}

inline double field_accuracy(const std::map<std::string, std::string>& preds,
                             const std::map<std::string, std::string>& gts, StructuredField field) {
  for (const auto& [id, _] : preds)
    if (!gts.count(id)) raise(Errc::UnpairedRecord, "prediction '" + id + "' has no ground truth");
  if (gts.empty()) raise(Errc::EmptyInput, "no ground-truth fields");

  std::size_t hits = 0;
  for (const auto& [id, gt] : gts) {
    const auto it = preds.find(id);
    if (it != preds.end() && field_match(it->second, gt, field)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gts.size());
}

}  // namespace pavekit::evalkit
