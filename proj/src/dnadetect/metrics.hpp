#pragma once

#include <span>
#include <vector>

#include "dnadetect/core.hpp"

namespace dna {

/// Area under the ROC curve for detection scores where higher means more
/// AI-like and AI is the positive class. Mann-Whitney U with average ranks
/// for ties. Throws kSingleClass unless both labels are present.
double auroc(std::span<const double> detection_scores, std::span<const Label> labels);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  /// 2TP / (2TP + FP + FN); 0 when nothing is predicted positive.
  double f1() const;
  /// FP / (FP + TN); 0 with no negatives.
  double fpr() const;
};

/// Confusion on the repair-score scale: score <= threshold predicts AI.
Confusion confusion_at(std::span<const double> repair_scores, std::span<const Label> labels,
                       double threshold);

double f1_score(std::span<const double> repair_scores, std::span<const Label> labels, double threshold);

struct F1Max {
  double f1 = 0.0;
  double threshold = 0.0;
};

/// Best F1 over threshold_candidates(). Ties go to the candidate farthest
/// from its nearest AI score, then to the lower threshold.
F1Max f1_max(std::span<const double> repair_scores, std::span<const Label> labels);

/// Midpoints between adjacent distinct sorted scores plus a sentinel one
/// below the minimum and one above the maximum; ascending. Every achievable
/// confusion matrix is realized by exactly one candidate.
std::vector<double> threshold_candidates(std::span<const double> scores);

}  // namespace dna
