#include "dnadetect/tokenizer.hpp"

#include <algorithm>
#include <cctype>

namespace dna {

TokenSequence ByteTokenizer::tokenize(std::string_view text) {
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
  if (blank) fail(ErrorCode::kEmptyInput, "input text is empty after trimming");

  TokenSequence seq;
  seq.token_ids.reserve(text.size());
  for (unsigned char c : text) seq.token_ids.push_back(c);
  seq.text = std::string(text);
  return seq;
}

std::string ByteTokenizer::detokenize(std::span<const TokenId> tokens) {
  std::string out;
  out.reserve(tokens.size());
  for (TokenId t : tokens) {
    if (t >= kVocabSize) {
      fail(ErrorCode::kVocabMismatch, "token " + std::to_string(t) + " is not a byte");
    }
    out.push_back(static_cast<char>(static_cast<unsigned char>(t)));
  }
  return out;
}

}  // namespace dna
