#include <doctest.h>

#include <cmath>

#include "dnadetect/scoring.hpp"
#include "fixture.hpp"

using namespace dna;

TEST_CASE("fixture components match hand computation") {
  const PositionAnalysis a = testing::fixture_analysis();
  // log-PPL = -(ln 0.75 + ln 0.4) / 2
  const double lppl = -(std::log(0.75) + std::log(0.4)) / 2;
  // X-PPL = -(0.75 ln 0.7 + 0.4 ln 0.5) / 2
  const double xppl = -(0.75 * std::log(0.7) + 0.4 * std::log(0.5)) / 2;
  // ideal: position 2 repaired to A with ln 0.6
  const double ideal = -(std::log(0.75) + std::log(0.6)) / 2;
  CHECK(log_ppl(a) == doctest::Approx(lppl).epsilon(1e-14));
  CHECK(cross_ppl(a) == doctest::Approx(xppl).epsilon(1e-14));
  const ScoreComponents c = score_components(a);
  CHECK(c.sigma == doctest::Approx(lppl / xppl).epsilon(1e-14));
  CHECK(c.sigma_ideal == doctest::Approx(ideal / xppl).epsilon(1e-14));
  CHECK(c.log_ppl == doctest::Approx(0.601986).epsilon(1e-6));
  CHECK(c.x_ppl == doctest::Approx(0.272383).epsilon(1e-6));
  CHECK(c.sigma == doctest::Approx(2.21007).epsilon(1e-5));
  CHECK(c.sigma_ideal == doctest::Approx(1.46578).epsilon(1e-5));
}

TEST_CASE("full-vocabulary cross-perplexity") {
  const PositionAnalysis a = testing::fixture_analysis(true);
  const double h1 = -(0.75 * std::log(0.7) + 0.25 * std::log(0.3));
  const double h2 = -(0.6 * std::log(0.5) + 0.4 * std::log(0.5));
  CHECK(cross_ppl(a, XentMode::kFullVocab) == doctest::Approx((h1 + h2) / 2).epsilon(1e-14));
  CHECK(score_components(a, XentMode::kFullVocab).x_ppl_mode == XentMode::kFullVocab);

  try {
    cross_ppl(testing::fixture_analysis(false), XentMode::kFullVocab);
    FAIL("expected ModeUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kModeUnsupported);
  }
}

TEST_CASE("conditional log-perplexity keeps the original prefix") {
  const PositionAnalysis a = testing::fixture_analysis();
  CHECK(conditional_log_ppl(a, RepairState{}) == doctest::Approx(log_ppl(a)));
  CHECK(conditional_log_ppl(a, RepairState({2})) ==
        doctest::Approx(-(std::log(0.75) + std::log(0.6)) / 2).epsilon(1e-14));
  try {
    conditional_log_ppl(a, RepairState({1}));
    FAIL("expected InvalidRepairSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidRepairSet);
  }
  CHECK(sigma(a, RepairState({2})) == doctest::Approx(score_components(a).sigma_ideal));
}

TEST_CASE("degenerate denominator") {
  CHECK_THROWS_AS(check_denominator(0.0), Error);
  CHECK_THROWS_AS(check_denominator(kMinCrossPerplexity), Error);
  CHECK_NOTHROW(check_denominator(2 * kMinCrossPerplexity));
  // Observer certain of the actual tokens: every lp_obs = 0, so X-PPL = 0.
  const TableProvider p = TableProvider::from_json(R"({
    "vocab_size": 2,
    "entries": [],
    "fallback": {"ref": [0.5, 0.5], "obs": [1.0, 0.0]}})");
  const PositionAnalysis a = p.analyze(TokenSequence{{0, 0, 0}, std::nullopt});
  try {
    score_components(a);
    FAIL("expected DegenerateDenominator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateDenominator);
  }
}
