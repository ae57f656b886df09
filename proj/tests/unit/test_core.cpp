#include <doctest.h>

#include <cmath>

#include "dnadetect/core.hpp"
#include "dnadetect/tokenizer.hpp"

using namespace dna;

namespace {

PositionRecord rec(Position i, TokenId tok, double lp, TokenId arg, double arg_lp) {
  PositionRecord r;
  r.index = i;
  r.actual_token = tok;
  r.actual_logprob_ref = lp;
  r.actual_logprob_obs = lp;
  r.argmax_token = arg;
  r.argmax_logprob_ref = arg_lp;
  return r;
}

}  // namespace

TEST_CASE("position analysis validates its records") {
  CHECK_THROWS_AS(PositionAnalysis({}), Error);
  CHECK_NOTHROW(PositionAnalysis({rec(1, 0, -0.5, 0, -0.5), rec(2, 1, -1.0, 0, -0.2)}));
  // gap in indices
  CHECK_THROWS_AS(PositionAnalysis({rec(1, 0, -0.5, 0, -0.5), rec(3, 1, -1.0, 0, -0.2)}), Error);
  // positive log-probability
  CHECK_THROWS_AS(PositionAnalysis({rec(1, 0, 0.1, 0, 0.1)}), Error);
  // actual token more likely than the argmax
  CHECK_THROWS_AS(PositionAnalysis({rec(1, 1, -0.1, 0, -0.5)}), Error);
  CHECK_THROWS_AS(PositionAnalysis({rec(1, 1, -NAN, 0, -0.5)}), Error);
  try {
    PositionAnalysis({rec(1, 0, 0.1, 0, 0.1)});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("mutated positions are the ones off the argmax") {
  const PositionAnalysis a({rec(1, 0, -0.5, 0, -0.5), rec(2, 1, -1.0, 0, -0.2), rec(3, 2, -2.0, 1, -0.1)});
  CHECK(a.scored_length() == 3);
  CHECK(a.mutated_count() == 2);
  CHECK(a.mutated_positions()[0] == 2);
  CHECK(a.mutated_positions()[1] == 3);
  CHECK(a.at(3).argmax_token == 1);
  CHECK_FALSE(a.contains(4));
  CHECK_FALSE(a.has_full_cross_entropy());
}

TEST_CASE("repair state keeps a sorted unique set") {
  const RepairState s({5, 2, 5, 3});
  CHECK(s.step() == 3);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(4));
  CHECK(s.repaired_set()[0] == 2);
}

TEST_CASE("names round-trip") {
  for (RepairStrategy s : {RepairStrategy::kClosedForm, RepairStrategy::kLowToHigh, RepairStrategy::kHighToLow,
                           RepairStrategy::kSequential, RepairStrategy::kRandom}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK(parse_strategy("high_to_low") == RepairStrategy::kHighToLow);
  CHECK_FALSE(parse_strategy("greedy").has_value());
  CHECK(parse_label("AI") == Label::kAi);
  CHECK(parse_label("Human") == Label::kHuman);
  CHECK_FALSE(parse_label("bot").has_value());
  CHECK(parse_xent_mode("full-vocab") == XentMode::kFullVocab);
  CHECK(to_string(Verdict::kHumanWritten) == "human_written");
}

TEST_CASE("byte tokenizer") {
  const std::string text = "caf\xc3\xa9 \n";
  const TokenSequence t = ByteTokenizer::tokenize(text);
  CHECK(t.size() == text.size());
  CHECK(t.token_ids[3] == 0xc3);
  CHECK(ByteTokenizer::detokenize(t.token_ids) == text);
  CHECK_THROWS_AS(ByteTokenizer::tokenize(""), Error);
  CHECK_THROWS_AS(ByteTokenizer::tokenize(" \n\t"), Error);
  const std::vector<TokenId> bad{65, 256};
  CHECK_THROWS_AS(ByteTokenizer::detokenize(bad), Error);
}
