#pragma once

#include <string>
#include <string_view>

#include "dnadetect/core.hpp"

namespace dna {

/// Byte-level tokenizer: token id = byte value. Vocabulary 256 plus a
/// begin-of-sequence symbol that is only ever used as context.
class ByteTokenizer {
 public:
  static constexpr std::size_t kVocabSize = 256;
  static constexpr TokenId kBos = 256;

  /// Throws kEmptyInput for empty or all-whitespace text. The text itself is
  /// not trimmed, so detokenize(tokenize(t)) == t.
  static TokenSequence tokenize(std::string_view text);
  static std::string detokenize(std::span<const TokenId> tokens);
};

}  // namespace dna
