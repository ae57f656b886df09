#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dnadetect/core.hpp"
#include "dnadetect/ngram.hpp"

namespace dna {

inline constexpr std::size_t kDefaultMaxTokens = 1024;

/// Descriptor of a reference model M1 and observer model M2 sharing one
/// tokenizer and vocabulary.
struct ProviderPair {
  std::string reference_id;
  std::string observer_id;
  std::size_t vocab_size = 0;  // 0 = unknown (remote without a configured size)
  bool supports_full_cross_entropy = false;
  std::size_t max_tokens = kDefaultMaxTokens;
};

struct AnalyzedText {
  TokenSequence tokens;
  PositionAnalysis analysis;
};

/// One paired evaluation pass per analyze() call. Implementations are
/// immutable after construction and safe for concurrent use.
class Provider {
 public:
  virtual ~Provider() = default;

  virtual const ProviderPair& pair() const = 0;
  virtual TokenSequence tokenize(std::string_view text) const = 0;
  /// Requires 1 <= |tokens| <= max_tokens; truncation is the caller's job.
  virtual PositionAnalysis analyze(const TokenSequence& tokens, bool full_xent = false) const = 0;

  /// Tokenize, keep the first min(cap, max_tokens) tokens, analyze. Counts as
  /// one analysis.
  virtual AnalyzedText analyze_text(std::string_view text, std::size_t cap,
                                    bool full_xent = false) const;

 protected:
  void check_tokens(const TokenSequence& tokens) const;
};

/// Built-in provider: two byte-level n-gram models (reference, observer).
class NgramProvider final : public Provider {
 public:
  NgramProvider(std::shared_ptr<const NgramModel> reference,
                std::shared_ptr<const NgramModel> observer,
                std::size_t max_tokens = kDefaultMaxTokens);

  const ProviderPair& pair() const override { return pair_; }
  TokenSequence tokenize(std::string_view text) const override;
  PositionAnalysis analyze(const TokenSequence& tokens, bool full_xent = false) const override;

  const NgramModel& reference() const { return *reference_; }
  const NgramModel& observer() const { return *observer_; }

 private:
  std::shared_ptr<const NgramModel> reference_;
  std::shared_ptr<const NgramModel> observer_;
  ProviderPair pair_;
};

/// Test fixture provider: explicit next-token distributions keyed by the full
/// prefix x_{<i}. Tokenizes text byte-wise.
class TableProvider final : public Provider {
 public:
  struct Entry {
    std::vector<double> reference;
    std::vector<double> observer;
  };

  /// Every distribution must have vocab_size non-negative entries summing to
  /// 1 within 1e-9. `fallback`, when set, serves prefixes with no entry.
  TableProvider(std::size_t vocab_size, std::map<std::vector<TokenId>, Entry> table,
                std::optional<Entry> fallback = std::nullopt,
                std::size_t max_tokens = kDefaultMaxTokens);

  /// JSON form: {"vocab_size": n, "max_tokens": m?, "entries": [{"prefix": [..],
  /// "ref": [..], "obs": [..]}], "fallback": {"ref": [..], "obs": [..]}?}
  static TableProvider from_json(std::string_view json);

  const ProviderPair& pair() const override { return pair_; }
  TokenSequence tokenize(std::string_view text) const override;
  PositionAnalysis analyze(const TokenSequence& tokens, bool full_xent = false) const override;

  const Entry& entry_for(std::span<const TokenId> prefix) const;

 private:
  std::map<std::vector<TokenId>, Entry> table_;
  std::optional<Entry> fallback_;
  ProviderPair pair_;
};

/// Decorator counting analysis passes.
class CountingProvider final : public Provider {
 public:
  explicit CountingProvider(std::shared_ptr<const Provider> inner) : inner_(std::move(inner)) {}

  const ProviderPair& pair() const override { return inner_->pair(); }
  TokenSequence tokenize(std::string_view text) const override { return inner_->tokenize(text); }
  PositionAnalysis analyze(const TokenSequence& tokens, bool full_xent = false) const override;
  AnalyzedText analyze_text(std::string_view text, std::size_t cap,
                            bool full_xent = false) const override;

  std::uint64_t calls() const { return calls_.load(); }
  void reset() const { calls_.store(0); }
  const Provider& inner() const { return *inner_; }

 private:
  std::shared_ptr<const Provider> inner_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// Builds a position record from the two next-token distributions at one
/// position. Shared by the local providers and the remote wire tests.
PositionRecord make_record(Position index, TokenId actual, std::span<const double> reference,
                           std::span<const double> observer, bool full_xent);

}  // namespace dna
