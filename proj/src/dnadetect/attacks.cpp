#include "dnadetect/attacks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "dnadetect/numeric.hpp"

namespace dna {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kInsertion: return "insertion";
    case AttackKind::kDeletion: return "deletion";
    case AttackKind::kSubstitution: return "substitution";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "insert" || n == "insertion") return AttackKind::kInsertion;
  if (n == "delete" || n == "deletion") return AttackKind::kDeletion;
  if (n == "substitute" || n == "substitution") return AttackKind::kSubstitution;
  return std::nullopt;
}

std::size_t edit_count(double rate, std::size_t length) {
  return static_cast<std::size_t>(std::ceil(rate * static_cast<double>(length) - 1e-9));
}

namespace {

// k distinct values from [0, n), ascending, via a partial Fisher-Yates shuffle.
std::vector<std::size_t> choose_positions(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(n - i)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

TokenSequence apply_edit_attack(const TokenSequence& tokens, const AttackSpec& spec, std::size_t vocab_size) {
  if (tokens.empty()) fail(ErrorCode::kEmptyInput, "cannot attack an empty sequence");
  if (!(spec.rate > 0.0 && spec.rate <= 0.5)) {
    fail(ErrorCode::kInvalidArgument, "attack rate must be in (0, 0.5]");
  }
  if (vocab_size < 2) fail(ErrorCode::kInvalidArgument, "attack needs a vocabulary of at least 2 tokens");

  const std::vector<TokenId>& in = tokens.token_ids;
  const std::size_t length = in.size();
  const std::size_t edits = edit_count(spec.rate, length);
  Rng rng(spec.seed);
  TokenSequence out;

  switch (spec.kind) {
    case AttackKind::kSubstitution: {
      out.token_ids = in;
      for (std::size_t p : choose_positions(length, edits, rng)) {
        auto replacement = static_cast<TokenId>(rng.below(vocab_size - 1));
        if (replacement >= in[p]) ++replacement;
        out.token_ids[p] = replacement;
      }
      break;
    }
    case AttackKind::kDeletion: {
      if (edits >= length) {
        fail(ErrorCode::kEmptyAfterDeletion, "deleting " + std::to_string(edits) + " of " +
                                                 std::to_string(length) + " tokens leaves nothing");
      }
      const auto doomed = choose_positions(length, edits, rng);
      out.token_ids.reserve(length - edits);
      std::size_t d = 0;
      for (std::size_t p = 0; p < length; ++p) {
        if (d < doomed.size() && doomed[d] == p) {
          ++d;
          continue;
        }
        out.token_ids.push_back(in[p]);
      }
      break;
    }
    case AttackKind::kInsertion: {
      const auto gaps = choose_positions(length + 1, edits, rng);
      out.token_ids.reserve(length + edits);
      std::size_t g = 0;
      for (std::size_t p = 0; p <= length; ++p) {
        if (g < gaps.size() && gaps[g] == p) {
          out.token_ids.push_back(static_cast<TokenId>(rng.below(vocab_size)));
          ++g;
        }
        if (p < length) out.token_ids.push_back(in[p]);
      }
      break;
    }
  }
  return out;
}

TokenSequence truncate(const TokenSequence& tokens, std::size_t target) {
  if (target < 1) fail(ErrorCode::kInvalidArgument, "truncation target must be >= 1");
  if (target >= tokens.size()) return tokens;
  TokenSequence out;
  out.token_ids.assign(tokens.token_ids.begin(), tokens.token_ids.begin() + static_cast<std::ptrdiff_t>(target));
  return out;
}

}  // namespace dna
