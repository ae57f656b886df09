#include "dnadetect/scoring.hpp"

#include <cmath>

#include "dnadetect/numeric.hpp"

namespace dna {

double log_ppl(const PositionAnalysis& analysis) {
  CompensatedSum sum;
  for (const PositionRecord& r : analysis.records()) sum.add(r.actual_logprob_ref);
  // -0.0 for certain sequences reads badly in reports.
  return 0.0 - sum.value() / static_cast<double>(analysis.scored_length());
}

double cross_ppl(const PositionAnalysis& analysis, XentMode mode) {
  CompensatedSum sum;
  if (mode == XentMode::kFullVocab) {
    if (!analysis.has_full_cross_entropy()) {
      fail(ErrorCode::kModeUnsupported, "full-vocab cross-perplexity needs per-position cross entropy");
    }
    for (const PositionRecord& r : analysis.records()) sum.add(*r.cross_entropy_full);
    return sum.value() / static_cast<double>(analysis.scored_length());
  }
  for (const PositionRecord& r : analysis.records()) {
    sum.add(std::exp(r.actual_logprob_ref) * r.actual_logprob_obs);
  }
  return 0.0 - sum.value() / static_cast<double>(analysis.scored_length());
}

double conditional_log_ppl(const PositionAnalysis& analysis, const RepairState& repaired) {
  for (Position p : repaired.repaired_set()) {
    if (!analysis.contains(p) || !analysis.at(p).mutated()) {
      fail(ErrorCode::kInvalidRepairSet, "position " + std::to_string(p) + " is not a mutated position");
    }
  }
  CompensatedSum sum;
  for (const PositionRecord& r : analysis.records()) {
    sum.add(repaired.contains(r.index) ? r.argmax_logprob_ref : r.actual_logprob_ref);
  }
  return 0.0 - sum.value() / static_cast<double>(analysis.scored_length());
}

void check_denominator(double x_ppl) {
  if (!(x_ppl > kMinCrossPerplexity)) {
    fail(ErrorCode::kDegenerateDenominator,
         "cross-perplexity " + std::to_string(x_ppl) + " is too small to normalize by");
  }
}

double sigma(const PositionAnalysis& analysis, const RepairState& repaired, XentMode mode) {
  const double numerator = conditional_log_ppl(analysis, repaired);
  const double x = cross_ppl(analysis, mode);
  check_denominator(x);
  return numerator / x;
}

ScoreComponents score_components(const PositionAnalysis& analysis, XentMode mode) {
  ScoreComponents c;
  c.x_ppl_mode = mode;
  c.x_ppl = cross_ppl(analysis, mode);
  check_denominator(c.x_ppl);

  CompensatedSum actual;
  CompensatedSum ideal;
  for (const PositionRecord& r : analysis.records()) {
    actual.add(r.actual_logprob_ref);
    ideal.add(r.argmax_logprob_ref);
  }
  const auto n = static_cast<double>(analysis.scored_length());
  c.log_ppl = 0.0 - actual.value() / n;
  c.sigma = c.log_ppl / c.x_ppl;
  c.sigma_ideal = (0.0 - ideal.value() / n) / c.x_ppl;
  return c;
}

}  // namespace dna
