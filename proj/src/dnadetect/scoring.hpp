#pragma once

#include "dnadetect/core.hpp"

namespace dna {

/// Denominators at or below this are treated as degenerate.
inline constexpr double kMinCrossPerplexity = 1e-9;

struct ScoreComponents {
  double log_ppl = 0.0;      // nats/token under the reference model
  double x_ppl = 0.0;        // nats/token, reference-weighted observer log-loss
  double sigma = 0.0;        // log_ppl / x_ppl
  double sigma_ideal = 0.0;  // sigma with every mutated token repaired
  XentMode x_ppl_mode = XentMode::kPointwise;
};

/// -(1/L) sum_i log P_ref(x_i | x_<i).
double log_ppl(const PositionAnalysis& analysis);

/// Pointwise: -(1/L) sum_i P_ref(x_i | x_<i) log P_obs(x_i | x_<i).
/// Full vocab: (1/L) sum_i H(P_ref(.|x_<i), P_obs(.|x_<i)); throws
/// kModeUnsupported when the analysis carries no cross-entropy terms.
double cross_ppl(const PositionAnalysis& analysis, XentMode mode = XentMode::kPointwise);

/// Log-perplexity of the partially repaired sequence, still conditioned on
/// the original prefixes. Throws kInvalidRepairSet if `repaired` contains a
/// position that is not mutated.
double conditional_log_ppl(const PositionAnalysis& analysis, const RepairState& repaired);

/// conditional_log_ppl / cross_ppl. Throws kDegenerateDenominator when
/// cross_ppl <= kMinCrossPerplexity.
double sigma(const PositionAnalysis& analysis, const RepairState& repaired,
             XentMode mode = XentMode::kPointwise);

/// All of the above from one pass over the records.
ScoreComponents score_components(const PositionAnalysis& analysis,
                                 XentMode mode = XentMode::kPointwise);

/// Throws kDegenerateDenominator unless x_ppl > kMinCrossPerplexity.
void check_denominator(double x_ppl);

}  // namespace dna
