#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "dnadetect/ngram.hpp"
#include "dnadetect/tokenizer.hpp"

using namespace dna;

namespace {

std::vector<TokenId> bytes(std::string_view s) {
  return std::vector<TokenId>(s.begin(), s.end());
}

NgramModel ababab(unsigned order) {
  const std::vector<std::vector<TokenId>> docs{bytes("ABABAB")};
  return train_ngram(docs, {.order = order, .alpha = 0.1, .vocab_size = 256, .min_tokens = 1});
}

}  // namespace

TEST_CASE("add-alpha oracle on ABABAB") {
  const NgramModel m = ababab(1);
  const std::vector<TokenId> a = bytes("A");
  // c(A,B) = 3, c(A) = 3: (3 + 0.1) / (3 + 0.1 * 256)
  CHECK(m.probability(a, 'B') == doctest::Approx(3.1 / 28.6).epsilon(1e-12));
  CHECK(m.count(a, 'B') == 3);
  CHECK(m.context_total(a) == 3);
  // unseen continuation
  CHECK(m.probability(a, 'C') == doctest::Approx(0.1 / 28.6).epsilon(1e-12));
  // first position conditions on BOS
  CHECK(m.probability({}, 'A') == doctest::Approx(1.1 / 26.6).epsilon(1e-12));
  // unseen context falls back to uniform
  CHECK(m.probability(bytes("Z"), 'A') == doctest::Approx(1.0 / 256).epsilon(1e-12));
  const auto [tok, lp] = m.argmax(a);
  CHECK(tok == 'B');
  CHECK(lp == doctest::Approx(std::log(3.1 / 28.6)).epsilon(1e-12));
}

TEST_CASE("distributions sum to one") {
  const NgramModel m = ababab(2);
  std::vector<double> p(256);
  for (const char* h : {"", "A", "AB", "BA", "QQ"}) {
    m.distribution(bytes(h), p);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("argmax prefers the lowest id on ties") {
  const NgramModel m = ababab(1);
  CHECK(m.argmax(bytes("Z")).first == 0);
}

TEST_CASE("training rejects bad options and small corpora") {
  const std::vector<std::vector<TokenId>> docs{bytes("ABABAB")};
  try {
    train_ngram(docs, {});
    FAIL("expected CorpusTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCorpusTooSmall);
  }
  CHECK_THROWS_AS(train_ngram(docs, {.order = 0, .min_tokens = 1}), Error);
  CHECK_THROWS_AS(train_ngram(docs, {.order = 3, .alpha = 0.0, .min_tokens = 1}), Error);
  const std::vector<std::vector<TokenId>> out_of_vocab{{1, 2, 300}};
  CHECK_THROWS_AS(train_ngram(out_of_vocab, {.order = 1, .min_tokens = 1}), Error);
}

TEST_CASE("binary format round-trips") {
  const NgramModel m = ababab(3);
  const auto blob = m.serialize();
  CHECK(std::string(blob.begin(), blob.begin() + 4) == "DNAG");
  const NgramModel back = NgramModel::deserialize(blob);
  CHECK(back == m);
  CHECK(back.fingerprint() == m.fingerprint());
  CHECK(back.serialize() == blob);

  const auto path = std::filesystem::temp_directory_path() / "dnadetect_test_model.dnag";
  m.save(path);
  CHECK(NgramModel::load(path) == m);
  std::filesystem::remove(path);

  auto corrupt = blob;
  corrupt[0] = 'X';
  CHECK_THROWS_AS(NgramModel::deserialize(corrupt), Error);
  auto truncated = blob;
  truncated.resize(blob.size() - 3);
  CHECK_THROWS_AS(NgramModel::deserialize(truncated), Error);
  try {
    NgramModel::load("/nonexistent/model.dnag");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIoError);
    CHECK(std::string(e.what()).find("/nonexistent/model.dnag") != std::string::npos);
  }
}

TEST_CASE("different training data changes the fingerprint") {
  const std::vector<std::vector<TokenId>> other{bytes("ABABAA")};
  CHECK(train_ngram(other, {.order = 3, .min_tokens = 1}).fingerprint() != ababab(3).fingerprint());
}

TEST_CASE("sampling") {
  const NgramModel m = ababab(1);
  const TokenSequence greedy = sample(m, 6, 0.0, 1);
  CHECK(ByteTokenizer::detokenize(greedy.token_ids) == "ABABAB");
  CHECK(sample(m, 6, 0.0, 99).token_ids == greedy.token_ids);
  const std::vector<TokenId> prompt = bytes("B");
  CHECK(ByteTokenizer::detokenize(sample(m, 3, 0.0, 0, prompt).token_ids) == "ABA");

  const TokenSequence a = sample(m, 50, 1.0, 7);
  const TokenSequence b = sample(m, 50, 1.0, 7);
  const TokenSequence c = sample(m, 50, 1.0, 8);
  CHECK(a.token_ids == b.token_ids);
  CHECK(a.token_ids != c.token_ids);
  CHECK(a.size() == 50);
}
