#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dnadetect/core.hpp"

namespace dna {

/// Per-position score decrements. Repairing position p lowers the
/// conditional score by delta_p regardless of what else has been repaired,
/// because every conditional probability keeps the original prefix.
struct DeltaProfile {
  std::vector<std::pair<Position, double>> deltas;  // in position order
  double total = 0.0;
};

/// s-hat: the argmax token at every scored position.
TokenSequence ideal_sequence(const PositionAnalysis& analysis);

/// delta_p = (argmax_lp_p - actual_lp_p) / (L * x_ppl) for every mutated p.
DeltaProfile delta_profile(const PositionAnalysis& analysis, double x_ppl);

/// Repair order for a strategy: high-to-low = delta ascending, low-to-high =
/// delta descending (ties by position), sequential = position order, random =
/// seeded shuffle. kRandom without a seed throws kMissingSeed; kClosedForm has
/// no order and throws kInvalidArgument.
std::vector<Position> repair_order(const DeltaProfile& profile, RepairStrategy strategy,
                                   std::optional<std::uint64_t> seed = std::nullopt);

/// Trajectory for an explicit permutation of the mutated positions.
RepairTrajectory trajectory_for_order(const PositionAnalysis& analysis, std::vector<Position> order,
                                      XentMode mode = XentMode::kPointwise,
                                      RepairStrategy strategy = RepairStrategy::kSequential);

RepairTrajectory build_trajectory(const PositionAnalysis& analysis, RepairStrategy strategy,
                                  std::optional<std::uint64_t> seed = std::nullopt,
                                  XentMode mode = XentMode::kPointwise);

/// Mean of the trajectory scores, t = 0..T.
double repair_score_trajectory(const RepairTrajectory& trajectory);

/// Mean repair score over `n_permutations` seeded random repair orders.
double repair_score_random_avg(const PositionAnalysis& analysis, std::size_t n_permutations,
                               std::uint64_t seed, XentMode mode = XentMode::kPointwise);

/// (sigma(s) + sigma(s-hat | s)) / 2, the expected repair score under a
/// uniformly random repair order. Default detection score.
double repair_score_closed(const PositionAnalysis& analysis, XentMode mode = XentMode::kPointwise);

}  // namespace dna
