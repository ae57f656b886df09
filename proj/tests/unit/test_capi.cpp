#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "dnadetect/dnadetect.h"

namespace {

const char* const kFixtureTable = R"({
  "vocab_size": 2,
  "entries": [
    {"prefix": [], "ref": [0.75, 0.25], "obs": [0.7, 0.3]},
    {"prefix": [0], "ref": [0.6, 0.4], "obs": [0.5, 0.5]}
  ]})";

}  // namespace

TEST_CASE("C API scores the fixture") {
  dna_provider* p = nullptr;
  REQUIRE(dna_provider_table_json(kFixtureTable, &p) == DNA_OK);
  dna_score_options o;
  dna_score_options_init(&o);
  dna_score s;
  // "\x00\x01" is [A, B] under the byte tokenizer
  const char text[] = {'\x00', '\x01'};
  REQUIRE(dna_score_text(p, text, 2, &o, &s) == DNA_OK);
  CHECK(s.log_ppl == doctest::Approx(0.601986).epsilon(1e-6));
  CHECK(s.repair_score == doctest::Approx(1.83792).epsilon(1e-5));
  CHECK(s.mutated_count == 1);
  CHECK(dna_provider_analyze_calls(p) == 1);

  o.strategy = DNA_STRATEGY_HIGH_TO_LOW;
  dna_trajectory* t = nullptr;
  REQUIRE(dna_trajectory_text(p, text, 2, &o, &t) == DNA_OK);
  CHECK(dna_trajectory_size(t) == 2);
  char* csv = nullptr;
  REQUIRE(dna_trajectory_csv(t, &csv) == DNA_OK);
  CHECK(std::string(csv).rfind("t,sigma\n0,", 0) == 0);
  dna_string_free(csv);
  dna_trajectory_free(t);

  o.strategy = DNA_STRATEGY_RANDOM;
  CHECK(dna_trajectory_text(p, text, 2, &o, &t) == DNA_ERR_MISSING_SEED);
  CHECK(std::string(dna_last_error()).find("seed") != std::string::npos);
  dna_provider_free(p);
}

TEST_CASE("C API status codes") {
  CHECK(std::string(dna_status_name(DNA_ERR_DEGENERATE_DENOMINATOR)) == "DegenerateDenominator");
  CHECK(std::string(dna_status_name(DNA_OK)) == "Ok");
  dna_ngram* m = nullptr;
  CHECK(dna_ngram_load("/nonexistent.dnag", &m) == DNA_ERR_IO);
  CHECK(std::string(dna_last_error()).find("/nonexistent.dnag") != std::string::npos);
  CHECK(dna_ngram_load(nullptr, &m) == DNA_ERR_INVALID_ARGUMENT);
  dna_strategy st;
  CHECK(dna_strategy_parse("low-to-high", &st) == DNA_OK);
  CHECK(st == DNA_STRATEGY_LOW_TO_HIGH);
  CHECK(dna_strategy_parse("nope", &st) == DNA_ERR_INVALID_ARGUMENT);
  dna_verdict v;
  CHECK(dna_classify(0.5, 0.5, &v) == DNA_OK);
  CHECK(v == DNA_VERDICT_AI_GENERATED);
  CHECK(dna_classify(NAN, 0.5, &v) == DNA_ERR_NON_FINITE_SCORE);
}

TEST_CASE("C API n-gram, calibration and evaluation") {
  const std::string doc = "abcabcabd abcab cabcab abcabd";
  const char* docs[] = {doc.c_str()};
  const size_t lens[] = {doc.size()};
  dna_ngram_options no;
  dna_ngram_options_init(&no);
  dna_ngram* m = nullptr;
  CHECK(dna_ngram_train(docs, lens, 1, &no, &m) == DNA_ERR_CORPUS_TOO_SMALL);
  no.min_tokens = 1;
  no.order = 2;
  REQUIRE(dna_ngram_train(docs, lens, 1, &no, &m) == DNA_OK);
  dna_ngram_info info;
  REQUIRE(dna_ngram_info_get(m, &info) == DNA_OK);
  CHECK(info.order == 2);
  char* gen = nullptr;
  size_t gen_len = 0;
  REQUIRE(dna_ngram_sample(m, 6, 0.0, 1, "ab", 2, &gen, &gen_len) == DNA_OK);
  CHECK(gen_len == 6);
  dna_string_free(gen);

  dna_provider* p = nullptr;
  REQUIRE(dna_provider_ngram(m, nullptr, 0, &p) == DNA_OK);
  dna_ngram_free(m);  // the provider keeps its own reference
  dna_provider_info pi;
  REQUIRE(dna_provider_info_get(p, &pi) == DNA_OK);
  CHECK(std::string(pi.reference_id) == pi.observer_id);

  const std::string jsonl =
      "{\"id\": \"h1\", \"text\": \"abd cab\", \"label\": \"human\"}\n"
      "{\"id\": \"a1\", \"text\": \"abcabcabc\", \"label\": \"ai\"}\n"
      "{\"id\": \"h2\", \"text\": \"dab bad\", \"label\": \"human\"}\n"
      "{\"id\": \"a2\", \"text\": \"cabcabca\", \"label\": \"ai\"}\n";
  dna_corpus* c = nullptr;
  REQUIRE(dna_corpus_parse(jsonl.data(), jsonl.size(), 1, &c) == DNA_OK);
  CHECK(dna_corpus_size(c) == 4);
  CHECK(std::string(dna_corpus_id(c, 1)) == "a1");
  CHECK(dna_corpus_label(c, 1) == DNA_LABEL_AI);

  dna_eval_options eo;
  dna_eval_options_init(&eo);
  dna_report* r = nullptr;
  REQUIRE(dna_evaluate(c, p, &eo, &r) == DNA_OK);
  CHECK(dna_provider_analyze_calls(p) == 4);
  dna_metrics mt;
  REQUIRE(dna_report_metrics(r, &mt) == DNA_OK);
  CHECK(mt.n_samples == 4);
  CHECK(mt.auroc == 1.0);
  char* json = nullptr;
  REQUIRE(dna_report_json(r, "{\"file\": \"x.jsonl\"}", &json) == DNA_OK);
  CHECK(std::string(json).find("\"cli\"") != std::string::npos);
  dna_string_free(json);
  dna_report_free(r);

  double scores[4];
  int labels[4];
  dna_score_options so;
  dna_score_options_init(&so);
  for (size_t i = 0; i < 4; ++i) {
    dna_score s;
    REQUIRE(dna_score_sample(p, c, i, &so, &s) == DNA_OK);
    scores[i] = s.repair_score;
    labels[i] = dna_corpus_label(c, i);
  }
  dna_calibration cal;
  REQUIRE(dna_calibrate(scores, labels, 4, DNA_OBJECTIVE_MAX_F1, 0.0, &cal) == DNA_OK);
  CHECK(cal.achieved == 1.0);
  char* cj = nullptr;
  REQUIRE(dna_calibration_to_json(&cal, &cj) == DNA_OK);
  dna_calibration back;
  REQUIRE(dna_calibration_from_json(cj, &back) == DNA_OK);
  CHECK(back.threshold == cal.threshold);
  dna_string_free(cj);
  const int one_class[4] = {1, 1, 1, 1};
  CHECK(dna_calibrate(scores, one_class, 4, DNA_OBJECTIVE_MAX_F1, 0.0, &cal) == DNA_ERR_SINGLE_CLASS);

  char* attacked = nullptr;
  REQUIRE(dna_attack_corpus_jsonl(c, DNA_ATTACK_SUBSTITUTION, 0.2, 3, &attacked) == DNA_OK);
  CHECK(std::string(attacked).find("\"attack\":{\"kind\":\"substitution\"") != std::string::npos);
  dna_string_free(attacked);
  dna_corpus_free(c);
  dna_provider_free(p);
}
