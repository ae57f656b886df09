#pragma once

#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>

#include "dnadetect/providers.hpp"

namespace dna {

struct RemoteConfig {
  std::string url;  // http://host:port[/base]; POST {base}/v1/analyze
  std::uint32_t timeout_ms = 30000;
  std::uint32_t retries = 2;
  std::uint32_t max_in_flight = 4;
  std::size_t max_tokens = kDefaultMaxTokens;
  std::optional<std::size_t> vocab_size;
};

/// Client for the remote logits service. The service tokenizes and returns
/// compact per-position records for both models in one response, so only
/// text input is supported: tokenize() and analyze() throw kModeUnsupported.
class RemoteProvider final : public Provider {
 public:
  explicit RemoteProvider(RemoteConfig config);
  ~RemoteProvider() override;

  const ProviderPair& pair() const override { return pair_; }
  TokenSequence tokenize(std::string_view text) const override;
  PositionAnalysis analyze(const TokenSequence& tokens, bool full_xent = false) const override;
  AnalyzedText analyze_text(std::string_view text, std::size_t cap,
                            bool full_xent = false) const override;

  const RemoteConfig& config() const { return config_; }

 private:
  std::string post_with_retries(const std::string& body) const;

  RemoteConfig config_;
  std::string origin_;  // scheme://host:port
  std::string path_;    // {base}/v1/analyze
  ProviderPair pair_;
  std::unique_ptr<std::counting_semaphore<1024>> in_flight_;
};

// Wire format of POST /v1/analyze.
//   request:  {"text": string, "include_full_xent": bool}
//   response: {"tokens": [int], "positions": [{"i", "tok", "lp_ref", "lp_obs",
//              "argmax_tok", "argmax_lp_ref", "xent": float|null}]}
std::string encode_analyze_request(std::string_view text, bool full_xent);
/// Returns the parsed (text, include_full_xent) pair; throws kParseError.
std::pair<std::string, bool> decode_analyze_request(std::string_view body);
std::string encode_analyze_response(const TokenSequence& tokens, const PositionAnalysis& analysis);
/// Validates and converts a response body; throws kProviderUnavailable on a
/// malformed payload and kVocabMismatch when a token id >= vocab_size.
AnalyzedText decode_analyze_response(std::string_view body, std::optional<std::size_t> vocab_size);

}  // namespace dna
