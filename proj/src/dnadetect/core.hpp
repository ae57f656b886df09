#pragma once

// Domain types shared by every module. All log-probabilities are natural
// logs (nats) and all positions are 1-based.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnadetect/error.hpp"

namespace dna {

using TokenId = std::uint32_t;
using Position = std::uint32_t;

struct TokenSequence {
  std::vector<TokenId> token_ids;
  std::optional<std::string> text;

  std::size_t size() const { return token_ids.size(); }
  bool empty() const { return token_ids.empty(); }
};

struct PositionRecord {
  Position index = 0;
  TokenId actual_token = 0;
  double actual_logprob_ref = 0.0;
  double actual_logprob_obs = 0.0;
  TokenId argmax_token = 0;
  double argmax_logprob_ref = 0.0;
  std::optional<double> cross_entropy_full;

  bool mutated() const { return actual_token != argmax_token; }
};

/// Output of one paired forward pass over a token sequence. Validated and
/// immutable after construction.
class PositionAnalysis {
 public:
  /// Throws kInvalidArgument if records are empty, indices are not strictly
  /// consecutive, or any log-probability violates its bounds.
  explicit PositionAnalysis(std::vector<PositionRecord> records);

  std::span<const PositionRecord> records() const { return records_; }
  std::size_t scored_length() const { return records_.size(); }
  std::span<const Position> mutated_positions() const { return mutated_; }
  std::size_t mutated_count() const { return mutated_.size(); }

  /// Record for 1-based position `index`; throws kInvalidArgument if absent.
  const PositionRecord& at(Position index) const;
  bool contains(Position index) const;
  bool has_full_cross_entropy() const { return has_full_xent_; }

  bool operator==(const PositionAnalysis& other) const;

 private:
  std::vector<PositionRecord> records_;
  std::vector<Position> mutated_;
  bool has_full_xent_ = true;
};

/// s_t: the set of mutated positions already replaced by their argmax token.
class RepairState {
 public:
  RepairState() = default;
  explicit RepairState(std::vector<Position> repaired);

  static RepairState all_of(const PositionAnalysis& analysis);

  std::span<const Position> repaired_set() const { return repaired_; }
  std::size_t step() const { return repaired_.size(); }
  bool contains(Position index) const;

 private:
  std::vector<Position> repaired_;  // sorted, unique
};

enum class RepairStrategy { kClosedForm, kLowToHigh, kHighToLow, kSequential, kRandom };

std::string_view to_string(RepairStrategy strategy);
std::optional<RepairStrategy> parse_strategy(std::string_view name);

struct RepairTrajectory {
  std::vector<Position> permutation;
  std::vector<double> scores;  // sigma(s_t | s), t = 0..T
  RepairStrategy strategy = RepairStrategy::kSequential;
};

enum class XentMode { kPointwise, kFullVocab };

std::string_view to_string(XentMode mode);
std::optional<XentMode> parse_xent_mode(std::string_view name);

enum class Label { kHuman, kAi };

std::string_view to_string(Label label);
/// Case-insensitive "human" / "ai".
std::optional<Label> parse_label(std::string_view name);

enum class Verdict { kHumanWritten, kAiGenerated };

std::string_view to_string(Verdict verdict);

struct VerdictComponents {
  double sigma_s = 0.0;
  double sigma_ideal = 0.0;
  double log_ppl = 0.0;
  double x_ppl = 0.0;
  std::size_t mutated_count = 0;
};

struct DetectionVerdict {
  double repair_score = 0.0;
  double threshold = 0.0;
  Verdict label = Verdict::kAiGenerated;
  VerdictComponents components;
};

struct Sample {
  std::string id;
  std::string text;
  std::optional<Label> label;
  std::optional<std::string> source_model;
  std::optional<std::string> domain;
  std::optional<std::vector<TokenId>> tokens;
};

struct LabeledCorpus {
  std::vector<Sample> samples;

  std::size_t count(Label label) const;
};

}  // namespace dna
