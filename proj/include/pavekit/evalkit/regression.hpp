#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "pavekit/error.hpp"

namespace pavekit::evalkit {

struct RegressionScores {
  double mae = 0;
  double mse = 0;
  double rmse = 0;
  std::optional<double> r2;  // absent when ground truth has no variance
};

inline RegressionScores regression_scores(const std::vector<double>& preds,
                                          const std::vector<double>& gts) {
  if (preds.size() != gts.size()) raise(Errc::LengthMismatch, "prediction/ground-truth size mismatch");
  if (preds.empty()) raise(Errc::EmptyInput, "no samples");

  const double n = static_cast<double>(preds.size());
  double abs_sum = 0, sq_sum = 0, gt_sum = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double e = preds[i] - gts[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    gt_sum += gts[i];
  }

  RegressionScores s;
  s.mae = abs_sum / n;
  s.mse = sq_sum / n;
  s.rmse = std::sqrt(s.mse);

  const double mean = gt_sum / n;
  double var_sum = 0;
  for (double y : gts) var_sum += (y - mean) * (y - mean);
  if (var_sum > 0) s.r2 = 1.0 - sq_sum / var_sum;
  return s;
}

}  // namespace pavekit::evalkit
