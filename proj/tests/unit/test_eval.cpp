#include <doctest.h>

#include <sstream>

#include "dnadetect/corpus.hpp"
#include "dnadetect/eval.hpp"
#include "dnadetect/tokenizer.hpp"
#include "synthetic.hpp"

using namespace dna;

namespace {

LabeledCorpus subset(const LabeledCorpus& c, std::size_t stride) {
  LabeledCorpus out;
  for (std::size_t i = 0; i < c.samples.size(); i += stride) out.samples.push_back(c.samples[i]);
  return out;
}

}  // namespace

TEST_CASE("parallel evaluation equals serial evaluation") {
  const LabeledCorpus c = subset(testing::synthetic_corpus(testing::Split::kEval, 200), 4);
  const auto provider = testing::synthetic_setup().provider();
  EvalOptions o;
  o.strategy = RepairStrategy::kRandom;
  o.seed = 5;
  o.attack = AttackSpec{AttackKind::kInsertion, 0.02, 9};
  const std::string serial = report_to_json(evaluate(c, *provider, o));
  o.workers = 3;
  CHECK(report_to_json(evaluate(c, *provider, o)) == serial);
}

TEST_CASE("shorter inputs do not separate better") {
  const LabeledCorpus c = testing::synthetic_corpus(testing::Split::kEval, 200);
  const auto provider = testing::synthetic_setup().provider();
  EvalOptions full;
  EvalOptions short_inputs;
  short_inputs.truncation = 40;
  const double a_full = evaluate(c, *provider, full).auroc;
  const double a_short = evaluate(c, *provider, short_inputs).auroc;
  MESSAGE("AUROC at 40 tokens " << a_short << ", at 1024 tokens " << a_full);
  CHECK(a_short <= a_full + 0.02);
}

TEST_CASE("attacks touch AI samples only") {
  const LabeledCorpus c = subset(testing::synthetic_corpus(testing::Split::kEval, 200), 20);
  const auto provider = testing::synthetic_setup().provider();
  EvalOptions o;
  o.attack = AttackSpec{AttackKind::kDeletion, 0.05, 1};
  const EvalReport r = evaluate(c, *provider, o);
  for (const SampleResult& s : r.per_sample) {
    if (s.label == Label::kAi) {
      CHECK(s.edits == 15);
      CHECK(s.scored_length == 285);
    } else {
      CHECK(s.edits == 0);
      CHECK(s.scored_length == 300);
    }
  }
}

TEST_CASE("fixed threshold verdicts and metrics") {
  const LabeledCorpus c = subset(testing::synthetic_corpus(testing::Split::kEval, 200), 10);
  const auto provider = testing::synthetic_setup().provider();
  EvalOptions o;
  o.fixed_threshold = 1e9;  // everything predicted AI
  const EvalReport r = evaluate(c, *provider, o);
  REQUIRE(r.f1_fixed.has_value());
  CHECK(*r.f1_fixed == doctest::Approx(2.0 / 3));
  for (const SampleResult& s : r.per_sample) CHECK(s.verdict == Verdict::kAiGenerated);
  const std::string csv = report_to_csv(r);
  CHECK(csv.rfind("id,label,repair_score,sigma_s,sigma_ideal,T,verdict\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == c.samples.size() + 1);
}

TEST_CASE("evaluation errors") {
  const auto provider = testing::synthetic_setup().provider();
  std::istringstream one_class("{\"text\": \"a b\", \"label\": \"ai\"}\n{\"text\": \"c d\", \"label\": \"ai\"}\n");
  try {
    evaluate(parse_jsonl(one_class), *provider, {});
    FAIL("expected SingleClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleClass);
  }
  std::istringstream bad_tokens(
      "{\"id\": \"good\", \"text\": \"a b\", \"label\": \"human\"}\n"
      "{\"id\": \"bad\", \"text\": \"\", \"tokens\": [999], \"label\": \"ai\"}\n");
  try {
    evaluate(parse_jsonl(bad_tokens), *provider, {});
    FAIL("expected VocabMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVocabMismatch);
    CHECK(std::string(e.what()).rfind("sample bad: ", 0) == 0);
  }
  EvalOptions o;
  o.strategy = RepairStrategy::kRandom;
  CHECK_THROWS_AS(evaluate(testing::synthetic_corpus(testing::Split::kEval, 2), *provider, o), Error);
}

TEST_CASE("attacked corpus export keeps exact tokens") {
  const LabeledCorpus c = subset(testing::synthetic_corpus(testing::Split::kEval, 200), 50);
  const AttackSpec spec{AttackKind::kSubstitution, 0.01, 7};
  std::istringstream in(attack_corpus_jsonl(c, spec));
  const LabeledCorpus back = parse_jsonl(in);
  REQUIRE(back.samples.size() == c.samples.size());
  const auto provider = testing::synthetic_setup().provider();
  EvalOptions clean;
  EvalOptions attacked;
  attacked.attack = spec;
  // scoring the exported corpus equals attacking during evaluation
  const EvalReport a = evaluate(back, *provider, clean);
  const EvalReport b = evaluate(c, *provider, attacked);
  for (std::size_t i = 0; i < a.per_sample.size(); ++i) {
    CHECK(a.per_sample[i].repair_score == b.per_sample[i].repair_score);
    const bool ai = c.samples[i].label == Label::kAi;
    CHECK(back.samples[i].tokens.has_value() == ai);
    if (!ai) CHECK(back.samples[i].text == c.samples[i].text);
  }
}
