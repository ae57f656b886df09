#include "dnadetect/repair.hpp"

#include <algorithm>
#include <unordered_map>

#include "dnadetect/numeric.hpp"
#include "dnadetect/scoring.hpp"

namespace dna {

TokenSequence ideal_sequence(const PositionAnalysis& analysis) {
  TokenSequence out;
  out.token_ids.reserve(analysis.scored_length());
  for (const PositionRecord& r : analysis.records()) out.token_ids.push_back(r.argmax_token);
  return out;
}

DeltaProfile delta_profile(const PositionAnalysis& analysis, double x_ppl) {
  check_denominator(x_ppl);
  const double scale = static_cast<double>(analysis.scored_length()) * x_ppl;
  DeltaProfile profile;
  CompensatedSum total;
  for (Position p : analysis.mutated_positions()) {
    const PositionRecord& r = analysis.at(p);
    const double delta = (r.argmax_logprob_ref - r.actual_logprob_ref) / scale;
    profile.deltas.emplace_back(p, delta);
    total.add(delta);
  }
  profile.total = total.value();
  return profile;
}

std::vector<Position> repair_order(const DeltaProfile& profile, RepairStrategy strategy,
                                   std::optional<std::uint64_t> seed) {
  auto entries = profile.deltas;
  switch (strategy) {
    case RepairStrategy::kSequential:
      break;
    case RepairStrategy::kHighToLow:
      std::stable_sort(entries.begin(), entries.end(),
                       [](const auto& a, const auto& b) { return a.second < b.second; });
      break;
    case RepairStrategy::kLowToHigh:
      std::stable_sort(entries.begin(), entries.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      break;
    case RepairStrategy::kRandom: {
      if (!seed) fail(ErrorCode::kMissingSeed, "random repair order needs a seed");
      Rng rng(*seed);
      for (std::size_t i = entries.size(); i > 1; --i) {
        std::swap(entries[i - 1], entries[rng.below(i)]);
      }
      break;
    }
    case RepairStrategy::kClosedForm:
      fail(ErrorCode::kInvalidArgument, "closed-form scoring has no repair order");
  }
  std::vector<Position> order;
  order.reserve(entries.size());
  for (const auto& e : entries) order.push_back(e.first);
  return order;
}

namespace {

RepairTrajectory walk(const ScoreComponents& c, const DeltaProfile& profile, std::vector<Position> order,
                      RepairStrategy strategy) {
  std::unordered_map<Position, double> delta_of;
  for (const auto& [p, d] : profile.deltas) delta_of.emplace(p, d);
  if (order.size() != delta_of.size()) {
    fail(ErrorCode::kInvalidRepairSet, "repair order must list every mutated position once");
  }

  RepairTrajectory traj;
  traj.strategy = strategy;
  traj.scores.reserve(order.size() + 1);
  traj.scores.push_back(c.sigma);
  CompensatedSum repaired;
  for (std::size_t t = 0; t < order.size(); ++t) {
    auto it = delta_of.find(order[t]);
    if (it == delta_of.end()) {
      fail(ErrorCode::kInvalidRepairSet,
           "position " + std::to_string(order[t]) + " is not mutated or is repeated");
    }
    repaired.add(it->second);
    delta_of.erase(it);
    // Clamp so every order ends exactly at sigma(s-hat|s) without rising.
    const double step = t + 1 == order.size() ? c.sigma_ideal
                                              : std::max(c.sigma_ideal, c.sigma - repaired.value());
    traj.scores.push_back(std::min(step, traj.scores.back()));
  }
  traj.permutation = std::move(order);
  return traj;
}

}  // namespace

RepairTrajectory trajectory_for_order(const PositionAnalysis& analysis, std::vector<Position> order,
                                      XentMode mode, RepairStrategy strategy) {
  const ScoreComponents c = score_components(analysis, mode);
  return walk(c, delta_profile(analysis, c.x_ppl), std::move(order), strategy);
}

RepairTrajectory build_trajectory(const PositionAnalysis& analysis, RepairStrategy strategy,
                                  std::optional<std::uint64_t> seed, XentMode mode) {
  if (strategy == RepairStrategy::kRandom && !seed) {
    fail(ErrorCode::kMissingSeed, "random repair order needs a seed");
  }
  const ScoreComponents c = score_components(analysis, mode);
  const DeltaProfile profile = delta_profile(analysis, c.x_ppl);
  return walk(c, profile, repair_order(profile, strategy, seed), strategy);
}

double repair_score_trajectory(const RepairTrajectory& trajectory) {
  if (trajectory.scores.empty()) fail(ErrorCode::kInvalidArgument, "empty trajectory");
  CompensatedSum sum;
  for (double s : trajectory.scores) sum.add(s);
  return sum.value() / static_cast<double>(trajectory.scores.size());
}

double repair_score_random_avg(const PositionAnalysis& analysis, std::size_t n_permutations,
                               std::uint64_t seed, XentMode mode) {
  if (n_permutations < 1) fail(ErrorCode::kInvalidArgument, "need at least one permutation");
  const ScoreComponents c = score_components(analysis, mode);
  const DeltaProfile profile = delta_profile(analysis, c.x_ppl);
  CompensatedSum sum;
  for (std::size_t n = 0; n < n_permutations; ++n) {
    auto order = repair_order(profile, RepairStrategy::kRandom, splitmix64(seed + n));
    sum.add(repair_score_trajectory(walk(c, profile, std::move(order), RepairStrategy::kRandom)));
  }
  return sum.value() / static_cast<double>(n_permutations);
}

double repair_score_closed(const PositionAnalysis& analysis, XentMode mode) {
  const ScoreComponents c = score_components(analysis, mode);
  return 0.5 * (c.sigma + c.sigma_ideal);
}

}  // namespace dna
