#include <doctest.h>

#include <random>

#include "dnadetect/attacks.hpp"

using namespace dna;

namespace {

TokenSequence seq(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TokenSequence t;
  for (std::size_t i = 0; i < n; ++i) t.token_ids.push_back(static_cast<TokenId>(rng() % 256));
  return t;
}

}  // namespace

TEST_CASE("edit count") {
  CHECK(edit_count(0.01, 300) == 3);
  CHECK(edit_count(0.01, 301) == 4);
  CHECK(edit_count(0.07, 100) == 7);
  CHECK(edit_count(0.01, 1) == 1);
}

TEST_CASE("substitution changes exactly ceil(rate * L) tokens") {
  for (std::size_t n : {1u, 7u, 100u, 300u, 1024u}) {
    for (double rate : {0.01, 0.05, 0.5}) {
      const TokenSequence t = seq(n, n);
      const TokenSequence a = apply_edit_attack(t, {AttackKind::kSubstitution, rate, 42}, 256);
      REQUIRE(a.size() == t.size());
      std::size_t changed = 0;
      for (std::size_t i = 0; i < n; ++i) changed += a.token_ids[i] != t.token_ids[i];
      CHECK(changed == edit_count(rate, n));
      CHECK(apply_edit_attack(t, {AttackKind::kSubstitution, rate, 42}, 256).token_ids == a.token_ids);
    }
  }
}

TEST_CASE("insertion and deletion lengths") {
  const TokenSequence t = seq(200, 1);
  const TokenSequence ins = apply_edit_attack(t, {AttackKind::kInsertion, 0.05, 3}, 256);
  CHECK(ins.size() == 210);
  const TokenSequence del = apply_edit_attack(t, {AttackKind::kDeletion, 0.05, 3}, 256);
  CHECK(del.size() == 190);
  // deletion keeps the surviving tokens in order
  std::size_t j = 0;
  for (std::size_t i = 0; i < t.size() && j < del.size(); ++i) j += t.token_ids[i] == del.token_ids[j];
  CHECK(j == del.size());
  // insertion keeps the original tokens as a subsequence
  j = 0;
  for (std::size_t i = 0; i < ins.size() && j < t.size(); ++i) j += ins.token_ids[i] == t.token_ids[j];
  CHECK(j == t.size());
}

TEST_CASE("attack errors") {
  const TokenSequence one = seq(1, 1);
  try {
    apply_edit_attack(one, {AttackKind::kDeletion, 0.5, 1}, 256);
    FAIL("expected EmptyAfterDeletion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyAfterDeletion);
  }
  CHECK_THROWS_AS(apply_edit_attack(seq(10, 1), {AttackKind::kSubstitution, 0.0, 1}, 256), Error);
  CHECK_THROWS_AS(apply_edit_attack(seq(10, 1), {AttackKind::kSubstitution, 0.6, 1}, 256), Error);
  CHECK(parse_attack_kind("substitute") == AttackKind::kSubstitution);
  CHECK(parse_attack_kind("insert") == AttackKind::kInsertion);
  CHECK(parse_attack_kind("delete") == AttackKind::kDeletion);
  CHECK_FALSE(parse_attack_kind("swap").has_value());
}

TEST_CASE("truncate") {
  const TokenSequence t = seq(50, 2);
  CHECK(truncate(t, 10).size() == 10);
  CHECK(truncate(t, 100).size() == 50);
  CHECK_THROWS_AS(truncate(t, 0), Error);
}
