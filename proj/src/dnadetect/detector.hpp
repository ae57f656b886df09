#pragma once

#include <span>
#include <string>
#include <string_view>

#include "dnadetect/core.hpp"

namespace dna {

/// Human-written iff repair_score > threshold; the boundary is AI.
/// Throws kNonFiniteScore for NaN/inf inputs.
Verdict classify(double repair_score, double threshold);

DetectionVerdict detect(double repair_score, double threshold, const VerdictComponents& components = {});

enum class Objective { kMaxF1, kTargetFpr };

struct CalibrationResult {
  double threshold = 0.0;
  Objective objective = Objective::kMaxF1;
  double target_fpr = 0.0;  // only meaningful for kTargetFpr
  double achieved = 0.0;    // F1 or FPR at threshold on the calibration set
  std::size_t n_samples = 0;
};

/// Picks a threshold on labeled repair scores. kMaxF1 maximizes F1 for the AI
/// class over midpoint candidates; kTargetFpr returns the largest candidate
/// whose false-positive rate on human samples is <= target_fpr.
CalibrationResult calibrate(std::span<const double> repair_scores, std::span<const Label> labels,
                            Objective objective, double target_fpr = 0.0);

/// {"threshold", "objective", "target_fpr"?, "achieved": {"f1"|"fpr"}, "n_samples"}
std::string to_json(const CalibrationResult& result);
CalibrationResult calibration_from_json(std::string_view json);

}  // namespace dna
