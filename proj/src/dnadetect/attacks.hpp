#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dnadetect/core.hpp"

namespace dna {

enum class AttackKind { kInsertion, kDeletion, kSubstitution };

std::string_view to_string(AttackKind kind);
/// Accepts insert/insertion, delete/deletion, substitute/substitution.
std::optional<AttackKind> parse_attack_kind(std::string_view name);

struct AttackSpec {
  AttackKind kind = AttackKind::kSubstitution;
  double rate = 0.01;  // fraction of tokens edited, in (0, 0.5]
  std::uint64_t seed = 0;
};

/// ceil(rate * L), guarded against products like 0.07 * 100 landing a hair
/// above an integer.
std::size_t edit_count(double rate, std::size_t length);

/// Applies exactly edit_count(rate, L) edits at distinct seeded-uniform
/// positions (gaps 0..L for insertion). Inserted and substituted tokens are
/// uniform over the vocabulary; a substitution never re-draws the original
/// token. Throws kEmptyAfterDeletion when deletion would remove every token.
TokenSequence apply_edit_attack(const TokenSequence& tokens, const AttackSpec& spec, std::size_t vocab_size);

/// First min(target, L) tokens. target must be >= 1.
TokenSequence truncate(const TokenSequence& tokens, std::size_t target);

}  // namespace dna
