#include <doctest.h>

#include <cmath>
#include <random>

#include "dnadetect/detector.hpp"
#include "dnadetect/metrics.hpp"

using namespace dna;

TEST_CASE("decision rule") {
  CHECK(classify(0.7, 0.6533) == Verdict::kHumanWritten);
  CHECK(classify(0.6, 0.6533) == Verdict::kAiGenerated);
  CHECK(classify(0.6533, 0.6533) == Verdict::kAiGenerated);  // boundary is AI
  try {
    classify(NAN, 0.5);
    FAIL("expected NonFiniteScore");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFiniteScore);
  }
  CHECK_THROWS_AS(classify(0.5, INFINITY), Error);
  const DetectionVerdict v = detect(1.2, 1.0, {});
  CHECK(v.label == Verdict::kHumanWritten);
  CHECK(v.threshold == 1.0);
}

TEST_CASE("calibration objectives") {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.4, 0.35, 0.5, 0.6, 0.7};
  const std::vector<Label> l{Label::kAi, Label::kAi, Label::kAi, Label::kAi,
                             Label::kHuman, Label::kHuman, Label::kHuman, Label::kHuman};
  const CalibrationResult m = calibrate(s, l, Objective::kMaxF1);
  CHECK(m.achieved == doctest::Approx(f1_max(s, l).f1));
  CHECK(m.threshold == doctest::Approx(f1_max(s, l).threshold));
  CHECK(m.n_samples == 8);

  const CalibrationResult z = calibrate(s, l, Objective::kTargetFpr, 0.0);
  CHECK(confusion_at(s, l, z.threshold).fp == 0);
  CHECK(z.threshold == doctest::Approx(0.325));

  const CalibrationResult q = calibrate(s, l, Objective::kTargetFpr, 0.25);
  CHECK(confusion_at(s, l, q.threshold).fpr() <= 0.25);
  CHECK(q.threshold == doctest::Approx(0.45));
  CHECK_THROWS_AS(calibrate(s, l, Objective::kTargetFpr, 1.0), Error);
  CHECK_THROWS_AS(calibrate(std::vector<double>{0.1}, std::vector<Label>{Label::kAi}, Objective::kMaxF1), Error);
}

TEST_CASE("target FPR holds on random data") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int n = 0; n < 30; ++n) {
    std::vector<double> s;
    std::vector<Label> l;
    for (int i = 0; i < 120; ++i) {
      const bool human = i % 2 == 0;
      s.push_back(noise(rng) + (human ? 1.0 : 0.0));
      l.push_back(human ? Label::kHuman : Label::kAi);
    }
    for (double q : {0.0, 0.01, 0.1, 0.5}) {
      const CalibrationResult r = calibrate(s, l, Objective::kTargetFpr, q);
      CHECK(confusion_at(s, l, r.threshold).fpr() <= q);
    }
  }
}

TEST_CASE("calibration JSON round-trip") {
  CalibrationResult r;
  r.threshold = 0.6533;
  r.objective = Objective::kTargetFpr;
  r.target_fpr = 0.01;
  r.achieved = 0.0;
  r.n_samples = 400;
  const CalibrationResult back = calibration_from_json(to_json(r));
  CHECK(back.threshold == r.threshold);
  CHECK(back.objective == r.objective);
  CHECK(back.target_fpr == r.target_fpr);
  CHECK(back.n_samples == 400);
  CHECK_THROWS_AS(calibration_from_json("{\"objective\": \"max_f1\"}"), Error);
  CHECK_THROWS_AS(calibration_from_json("not json"), Error);
}
