#include "dnadetect/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dna {

namespace {

void check_inputs(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    fail(ErrorCode::kInvalidArgument, "scores and labels differ in length");
  }
  if (scores.empty()) fail(ErrorCode::kEmptyInput, "no scores");
  for (double s : scores) {
    if (!std::isfinite(s)) fail(ErrorCode::kNonFiniteScore, "scores must be finite");
  }
  const bool has_ai = std::find(labels.begin(), labels.end(), Label::kAi) != labels.end();
  const bool has_human = std::find(labels.begin(), labels.end(), Label::kHuman) != labels.end();
  if (!has_ai || !has_human) fail(ErrorCode::kSingleClass, "both human and ai samples are required");
}

}  // namespace

double auroc(std::span<const double> detection_scores, std::span<const Label> labels) {
  check_inputs(detection_scores, labels);
  const std::size_t n = detection_scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return detection_scores[a] < detection_scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && detection_scores[order[j]] == detection_scores[order[i]]) ++j;
    // Ranks i+1 .. j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == Label::kAi) {
        positive_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  const double u = positive_rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double Confusion::f1() const {
  const std::size_t denom = 2 * tp + fp + fn;
  if (tp == 0 || denom == 0) return 0.0;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

double Confusion::fpr() const {
  const std::size_t negatives = fp + tn;
  return negatives == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(negatives);
}

Confusion confusion_at(std::span<const double> repair_scores, std::span<const Label> labels,
                       double threshold) {
  if (repair_scores.size() != labels.size()) {
    fail(ErrorCode::kInvalidArgument, "scores and labels differ in length");
  }
  Confusion c;
  for (std::size_t i = 0; i < repair_scores.size(); ++i) {
    const bool predicted_ai = repair_scores[i] <= threshold;
    const bool is_ai = labels[i] == Label::kAi;
    if (predicted_ai && is_ai) ++c.tp;
    else if (predicted_ai) ++c.fp;
    else if (is_ai) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double f1_score(std::span<const double> repair_scores, std::span<const Label> labels, double threshold) {
  check_inputs(repair_scores, labels);
  return confusion_at(repair_scores, labels, threshold).f1();
}

std::vector<double> threshold_candidates(std::span<const double> scores) {
  if (scores.empty()) fail(ErrorCode::kEmptyInput, "no scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> out;
  out.reserve(sorted.size() + 1);
  out.push_back(sorted.front() - 1.0);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    out.push_back(sorted[i] + 0.5 * (sorted[i + 1] - sorted[i]));
  }
  out.push_back(sorted.back() + 1.0);
  return out;
}

F1Max f1_max(std::span<const double> repair_scores, std::span<const Label> labels) {
  check_inputs(repair_scores, labels);
  const std::size_t n = repair_scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return repair_scores[a] < repair_scores[b]; });
  std::vector<double> ai_scores;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == Label::kAi) ai_scores.push_back(repair_scores[i]);
  }
  std::sort(ai_scores.begin(), ai_scores.end());
  const auto margin = [&](double tau) {
    auto it = std::lower_bound(ai_scores.begin(), ai_scores.end(), tau);
    double best = std::numeric_limits<double>::infinity();
    if (it != ai_scores.end()) best = std::min(best, *it - tau);
    if (it != ai_scores.begin()) best = std::min(best, tau - *(it - 1));
    return best;
  };

  Confusion c;
  c.fn = ai_scores.size();
  c.tn = n - c.fn;
  std::size_t next = 0;
  F1Max best{-1.0, 0.0};
  double best_margin = -1.0;
  for (double tau : threshold_candidates(repair_scores)) {
    while (next < n && repair_scores[order[next]] <= tau) {
      if (labels[order[next]] == Label::kAi) {
        ++c.tp;
        --c.fn;
      } else {
        ++c.fp;
        --c.tn;
      }
      ++next;
    }
    const double f1 = c.f1();
    const double m = margin(tau);
    if (f1 > best.f1 || (f1 == best.f1 && m > best_margin)) {
      best = {f1, tau};
      best_margin = m;
    }
  }
  return best;
}

}  // namespace dna
