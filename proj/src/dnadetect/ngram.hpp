#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dnadetect/core.hpp"

namespace dna {

struct NgramTrainOptions {
  unsigned order = 3;  // context length k
  double alpha = 0.1;  // add-alpha smoothing constant
  std::size_t vocab_size = 256;
  /// Minimum number of training tokens; defaults to 10 * vocab_size.
  std::optional<std::size_t> min_tokens;
};

/// Fixed-order Markov model over a closed vocabulary with add-alpha smoothing:
///   P(v | ctx) = (c(ctx, v) + alpha) / (c(ctx) + alpha * V)
/// Contexts shorter than `order` are left-padded with a BOS symbol (= V), so
/// every position of a sequence, including the first, has a distribution.
class NgramModel {
 public:
  static constexpr std::uint16_t kFormatVersion = 1;

  static NgramModel train(std::span<const std::vector<TokenId>> documents,
                          const NgramTrainOptions& options);

  static NgramModel deserialize(std::span<const std::uint8_t> bytes);
  static NgramModel load(const std::filesystem::path& path);
  std::vector<std::uint8_t> serialize() const;
  void save(const std::filesystem::path& path) const;

  unsigned order() const { return order_; }
  double alpha() const { return alpha_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t context_count() const { return rows_.size(); }
  TokenId bos() const { return static_cast<TokenId>(vocab_size_); }

  /// `history` is the full preceding token sequence x_{<i}.
  std::uint64_t context_total(std::span<const TokenId> history) const;
  std::uint64_t count(std::span<const TokenId> history, TokenId next) const;
  double probability(std::span<const TokenId> history, TokenId next) const;
  double logprob(std::span<const TokenId> history, TokenId next) const;
  /// Fills `out` (size vocab_size) with P(. | history).
  void distribution(std::span<const TokenId> history, std::span<double> out) const;
  /// Most probable next token (lowest id on ties) and its log-probability.
  std::pair<TokenId, double> argmax(std::span<const TokenId> history) const;

  /// FNV-1a over the serialized bytes; identifies the model in reports.
  std::uint64_t fingerprint() const;

  bool operator==(const NgramModel& other) const;

 private:
  struct Row {
    std::uint64_t total = 0;
    std::vector<std::pair<TokenId, std::uint64_t>> counts;  // sorted by token
    TokenId argmax = 0;
    std::uint64_t argmax_count = 0;

    bool operator==(const Row&) const = default;
  };

  NgramModel(unsigned order, double alpha, std::size_t vocab_size);

  std::uint64_t context_key(std::span<const TokenId> history) const;
  const Row* find(std::span<const TokenId> history) const;
  double denominator(std::uint64_t total) const {
    return static_cast<double>(total) + alpha_ * static_cast<double>(vocab_size_);
  }

  unsigned order_;
  double alpha_;
  std::size_t vocab_size_;
  unsigned symbol_bits_;
  std::unordered_map<std::uint64_t, Row> rows_;
};

NgramModel train_ngram(std::span<const std::vector<TokenId>> documents,
                       const NgramTrainOptions& options);

/// Draws `length` tokens continuing `prompt`. temperature == 0 is the greedy
/// rollout (argmax at every step, independent of seed); otherwise tokens are
/// drawn from P^(1/temperature) with a seeded generator.
TokenSequence sample(const NgramModel& model, std::size_t length, double temperature,
                     std::uint64_t seed, std::span<const TokenId> prompt = {});

}  // namespace dna
