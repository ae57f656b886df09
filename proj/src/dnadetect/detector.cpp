#include "dnadetect/detector.hpp"

#include <cmath>

#include <json.hpp>

#include "dnadetect/metrics.hpp"

namespace dna {

Verdict classify(double repair_score, double threshold) {
  if (!std::isfinite(repair_score) || !std::isfinite(threshold)) {
    fail(ErrorCode::kNonFiniteScore, "repair score and threshold must be finite");
  }
  return repair_score > threshold ? Verdict::kHumanWritten : Verdict::kAiGenerated;
}

DetectionVerdict detect(double repair_score, double threshold, const VerdictComponents& components) {
  DetectionVerdict v;
  v.repair_score = repair_score;
  v.threshold = threshold;
  v.label = classify(repair_score, threshold);
  v.components = components;
  return v;
}

CalibrationResult calibrate(std::span<const double> repair_scores, std::span<const Label> labels,
                            Objective objective, double target_fpr) {
  if (repair_scores.empty()) fail(ErrorCode::kEmptyInput, "calibration set is empty");
  CalibrationResult result;
  result.objective = objective;
  result.n_samples = repair_scores.size();

  if (objective == Objective::kMaxF1) {
    const F1Max best = f1_max(repair_scores, labels);
    result.threshold = best.threshold;
    result.achieved = best.f1;
    return result;
  }

  if (!(target_fpr >= 0.0 && target_fpr < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "target FPR must be in [0, 1)");
  }
  // Validates lengths, finiteness and class balance.
  (void)f1_score(repair_scores, labels, 0.0);
  result.target_fpr = target_fpr;
  const auto candidates = threshold_candidates(repair_scores);
  // The lowest sentinel predicts nothing as AI, so FPR = 0 always qualifies.
  result.threshold = candidates.front();
  result.achieved = 0.0;
  for (double tau : candidates) {
    const double fpr = confusion_at(repair_scores, labels, tau).fpr();
    if (fpr <= target_fpr) {
      result.threshold = tau;
      result.achieved = fpr;
    }
  }
  return result;
}

std::string to_json(const CalibrationResult& result) {
  nlohmann::ordered_json j;
  j["threshold"] = result.threshold;
  if (result.objective == Objective::kMaxF1) {
    j["objective"] = "max_f1";
    j["achieved"] = {{"f1", result.achieved}};
  } else {
    j["objective"] = "target_fpr";
    j["target_fpr"] = result.target_fpr;
    j["achieved"] = {{"fpr", result.achieved}};
  }
  j["n_samples"] = result.n_samples;
  return j.dump(2);
}

CalibrationResult calibration_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    CalibrationResult r;
    r.threshold = j.at("threshold").get<double>();
    if (!std::isfinite(r.threshold)) fail(ErrorCode::kParseError, "calibration threshold is not finite");
    const auto objective = j.value("objective", std::string("max_f1"));
    if (objective == "max_f1") {
      r.objective = Objective::kMaxF1;
      if (j.contains("achieved")) r.achieved = j["achieved"].value("f1", 0.0);
    } else if (objective == "target_fpr") {
      r.objective = Objective::kTargetFpr;
      r.target_fpr = j.value("target_fpr", 0.0);
      if (j.contains("achieved")) r.achieved = j["achieved"].value("fpr", 0.0);
    } else {
      fail(ErrorCode::kParseError, "unknown calibration objective '" + objective + "'");
    }
    r.n_samples = j.value("n_samples", std::size_t{0});
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("calibration JSON: ") + e.what());
  }
}

}  // namespace dna
