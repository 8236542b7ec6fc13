#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "pavekit/core/types.hpp"

namespace pavekit::evalkit {

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<double> matched_ious;

  std::size_t n_match() const { return matched_ious.size(); }
};

// Greedy matching: predictions ordered by their best IoU against any ground
// truth (descending; ties by input order), each claims its highest-IoU
// still-unmatched ground truth when that IoU >= tau. Each ground truth box
// is matched at most once.
inline MatchResult match_detections(const std::vector<BoxAbs>& preds, const std::vector<BoxAbs>& gts,
                                    double tau = 0.5) {
  if (!(tau > 0.0 && tau <= 1.0)) raise(Errc::InvalidArgument, "tau must lie in (0,1]");

  const std::size_t np = preds.size(), ng = gts.size();
  std::vector<double> ious(np * ng);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < ng; ++j) ious[i * ng + j] = iou(preds[i], gts[j]);

  std::vector<std::size_t> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> best(np, 0.0);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < ng; ++j) best[i] = std::max(best[i], ious[i * ng + j]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return best[a] > best[b]; });

  MatchResult result;
  std::vector<bool> gt_taken(ng, false);
  for (const std::size_t i : order) {
    double best_iou = 0.0;
    std::size_t best_j = ng;
    for (std::size_t j = 0; j < ng; ++j) {
      if (gt_taken[j]) continue;
      const double v = ious[i * ng + j];
      if (v > best_iou) {
        best_iou = v;
        best_j = j;
      }
    }
    if (best_j < ng && best_iou >= tau) {
      gt_taken[best_j] = true;
      result.matched_ious.push_back(best_iou);
      ++result.tp;
    } else {
      ++result.fp;
    }
  }
  result.fn = ng - result.tp;
  return result;
}

struct DetectionScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double mean_iou = 0;
};

// Division by zero yields 0 by convention.
inline DetectionScores detection_scores(const MatchResult& match) {
  DetectionScores s;
  const double tp = static_cast<double>(match.tp);
  if (match.tp + match.fp > 0) s.precision = tp / static_cast<double>(match.tp + match.fp);
  if (match.tp + match.fn > 0) s.recall = tp / static_cast<double>(match.tp + match.fn);
  if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  if (!match.matched_ious.empty())
    s.mean_iou = std::accumulate(match.matched_ious.begin(), match.matched_ious.end(), 0.0) /
                 static_cast<double>(match.matched_ious.size());
  return s;
}

}  // namespace pavekit::evalkit
