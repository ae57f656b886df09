#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dnadetect/repair.hpp"
#include "dnadetect/scoring.hpp"
#include "fixture.hpp"
#include "synthetic.hpp"

using namespace dna;

TEST_CASE("fixture delta and repair score") {
  const PositionAnalysis a = testing::fixture_analysis();
  const ScoreComponents c = score_components(a);
  const DeltaProfile d = delta_profile(a, c.x_ppl);
  REQUIRE(d.deltas.size() == 1);
  CHECK(d.deltas[0].first == 2);
  // (ln 0.6 - ln 0.4) / (2 * x_ppl)
  CHECK(d.deltas[0].second == doctest::Approx(std::log(1.5) / (2 * c.x_ppl)).epsilon(1e-14));
  CHECK(d.deltas[0].second == doctest::Approx(0.74430).epsilon(1e-5));
  CHECK(repair_score_closed(a) == doctest::Approx(1.83792).epsilon(1e-5));

  const RepairTrajectory t = build_trajectory(a, RepairStrategy::kSequential);
  REQUIRE(t.scores.size() == 2);
  CHECK(t.scores[0] == c.sigma);
  CHECK(t.scores[1] == c.sigma_ideal);
  CHECK(repair_score_trajectory(t) == doctest::Approx(repair_score_closed(a)).epsilon(1e-14));
}

TEST_CASE("ideal sequence takes the argmax everywhere") {
  const PositionAnalysis a = testing::fixture_analysis();
  CHECK(ideal_sequence(a).token_ids == std::vector<TokenId>{0, 0});
}

TEST_CASE("strategy orders") {
  DeltaProfile p;
  p.deltas = {{1, 0.3}, {2, 0.1}, {3, 0.3}, {4, 0.2}};
  CHECK(repair_order(p, RepairStrategy::kHighToLow) == std::vector<Position>{2, 4, 1, 3});
  CHECK(repair_order(p, RepairStrategy::kLowToHigh) == std::vector<Position>{1, 3, 4, 2});
  CHECK(repair_order(p, RepairStrategy::kSequential) == std::vector<Position>{1, 2, 3, 4});
  auto r1 = repair_order(p, RepairStrategy::kRandom, 5);
  CHECK(repair_order(p, RepairStrategy::kRandom, 5) == r1);
  std::sort(r1.begin(), r1.end());
  CHECK(r1 == std::vector<Position>{1, 2, 3, 4});
  try {
    repair_order(p, RepairStrategy::kRandom);
    FAIL("expected MissingSeed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingSeed);
  }
  CHECK_THROWS_AS(repair_order(p, RepairStrategy::kClosedForm), Error);
}

TEST_CASE("explicit orders must permute the mutated positions") {
  std::mt19937_64 rng(3);
  auto inst = testing::random_instance(rng, 12, 12, 4);
  const PositionAnalysis a = inst.provider->analyze(inst.tokens);
  std::vector<Position> order(a.mutated_positions().begin(), a.mutated_positions().end());
  if (!order.empty()) {
    auto missing = order;
    missing.pop_back();
    CHECK_THROWS_AS(trajectory_for_order(a, missing), Error);
  }
  auto extra = order;
  extra.push_back(999);
  CHECK_THROWS_AS(trajectory_for_order(a, extra), Error);
}

TEST_CASE("no mutated tokens gives a single-point trajectory") {
  const TableProvider p = TableProvider::from_json(testing::kFixtureTable);
  const PositionAnalysis a = p.analyze(TokenSequence{{0, 0}, std::nullopt});
  CHECK(a.mutated_count() == 0);
  const RepairTrajectory t = build_trajectory(a, RepairStrategy::kHighToLow);
  CHECK(t.scores.size() == 1);
  CHECK(repair_score_trajectory(t) == repair_score_closed(a));
}

TEST_CASE("random average converges to the closed form") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 5; ++n) {
    auto inst = testing::random_instance(rng, 30, 40, 6);
    const PositionAnalysis a = inst.provider->analyze(inst.tokens);
    const double closed = repair_score_closed(a);
    const double spread = score_components(a).sigma - score_components(a).sigma_ideal;
    CHECK(std::fabs(repair_score_random_avg(a, 4000, 9) - closed) <= 0.02 * spread + 1e-12);
    CHECK(repair_score_random_avg(a, 10, 9) == repair_score_random_avg(a, 10, 9));
  }
}

TEST_CASE("strategy curves bracket the sequential curve") {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 200; ++n) {
    auto inst = testing::random_instance(rng, 2, 40, 6);
    const PositionAnalysis a = inst.provider->analyze(inst.tokens);
    const auto hi = build_trajectory(a, RepairStrategy::kHighToLow).scores;
    const auto lo = build_trajectory(a, RepairStrategy::kLowToHigh).scores;
    const auto seq = build_trajectory(a, RepairStrategy::kSequential).scores;
    for (std::size_t t = 0; t < seq.size(); ++t) {
      CHECK(lo[t] <= seq[t] + 1e-12);
      CHECK(seq[t] <= hi[t] + 1e-12);
    }
  }
}
