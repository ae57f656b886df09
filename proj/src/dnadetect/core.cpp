#include "dnadetect/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace dna {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kVocabMismatch: return "VocabMismatch";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kCorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::kModeUnsupported: return "ModeUnsupported";
    case ErrorCode::kInvalidRepairSet: return "InvalidRepairSet";
    case ErrorCode::kDegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::kMissingSeed: return "MissingSeed";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kEmptyAfterDeletion: return "EmptyAfterDeletion";
  }
  return "Unknown";
}

namespace {

void check_logprob(double lp, Position index, const char* field) {
  if (!std::isfinite(lp) || lp > 0.0) {
    fail(ErrorCode::kInvalidArgument, "position " + std::to_string(index) + ": " + field +
                                          " must be finite and <= 0, got " + std::to_string(lp));
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

PositionAnalysis::PositionAnalysis(std::vector<PositionRecord> records)
    : records_(std::move(records)) {
  if (records_.empty()) {
    fail(ErrorCode::kInvalidArgument, "analysis needs at least one scored position");
  }
  for (std::size_t k = 0; k < records_.size(); ++k) {
    const PositionRecord& r = records_[k];
    if (r.index == 0) fail(ErrorCode::kInvalidArgument, "positions are 1-based");
    if (k > 0 && r.index != records_[k - 1].index + 1) {
      fail(ErrorCode::kInvalidArgument, "position indices must be consecutive");
    }
    check_logprob(r.actual_logprob_ref, r.index, "actual_logprob_ref");
    check_logprob(r.actual_logprob_obs, r.index, "actual_logprob_obs");
    check_logprob(r.argmax_logprob_ref, r.index, "argmax_logprob_ref");
    if (r.actual_logprob_ref > r.argmax_logprob_ref) {
      fail(ErrorCode::kInvalidArgument,
           "position " + std::to_string(r.index) + ": actual token more likely than argmax token");
    }
    if (r.cross_entropy_full) {
      if (!std::isfinite(*r.cross_entropy_full) || *r.cross_entropy_full < 0.0) {
        fail(ErrorCode::kInvalidArgument,
             "position " + std::to_string(r.index) + ": cross entropy must be finite and >= 0");
      }
    } else {
      has_full_xent_ = false;
    }
    if (r.mutated()) mutated_.push_back(r.index);
  }
}

bool PositionAnalysis::contains(Position index) const {
  return index >= records_.front().index && index <= records_.back().index;
}

const PositionRecord& PositionAnalysis::at(Position index) const {
  if (!contains(index)) {
    fail(ErrorCode::kInvalidArgument, "no scored position " + std::to_string(index));
  }
  return records_[index - records_.front().index];
}

bool PositionAnalysis::operator==(const PositionAnalysis& other) const {
  if (records_.size() != other.records_.size()) return false;
  for (std::size_t k = 0; k < records_.size(); ++k) {
    const auto& a = records_[k];
    const auto& b = other.records_[k];
    if (a.index != b.index || a.actual_token != b.actual_token ||
        a.actual_logprob_ref != b.actual_logprob_ref ||
        a.actual_logprob_obs != b.actual_logprob_obs || a.argmax_token != b.argmax_token ||
        a.argmax_logprob_ref != b.argmax_logprob_ref ||
        a.cross_entropy_full != b.cross_entropy_full) {
      return false;
    }
  }
  return true;
}

RepairState::RepairState(std::vector<Position> repaired) : repaired_(std::move(repaired)) {
  std::sort(repaired_.begin(), repaired_.end());
  repaired_.erase(std::unique(repaired_.begin(), repaired_.end()), repaired_.end());
}

RepairState RepairState::all_of(const PositionAnalysis& analysis) {
  auto mutated = analysis.mutated_positions();
  return RepairState(std::vector<Position>(mutated.begin(), mutated.end()));
}

bool RepairState::contains(Position index) const {
  return std::binary_search(repaired_.begin(), repaired_.end(), index);
}

std::string_view to_string(RepairStrategy strategy) {
  switch (strategy) {
    case RepairStrategy::kClosedForm: return "closed-form";
    case RepairStrategy::kLowToHigh: return "low-to-high";
    case RepairStrategy::kHighToLow: return "high-to-low";
    case RepairStrategy::kSequential: return "sequential";
    case RepairStrategy::kRandom: return "random";
  }
  return "unknown";
}

std::optional<RepairStrategy> parse_strategy(std::string_view name) {
  std::string n = lower(name);
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "closed-form") return RepairStrategy::kClosedForm;
  if (n == "low-to-high") return RepairStrategy::kLowToHigh;
  if (n == "high-to-low") return RepairStrategy::kHighToLow;
  if (n == "sequential") return RepairStrategy::kSequential;
  if (n == "random") return RepairStrategy::kRandom;
  return std::nullopt;
}

std::string_view to_string(XentMode mode) {
  return mode == XentMode::kPointwise ? "pointwise" : "full-vocab";
}

std::optional<XentMode> parse_xent_mode(std::string_view name) {
  std::string n = lower(name);
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "pointwise") return XentMode::kPointwise;
  if (n == "full-vocab") return XentMode::kFullVocab;
  return std::nullopt;
}

std::string_view to_string(Label label) { return label == Label::kHuman ? "human" : "ai"; }

std::optional<Label> parse_label(std::string_view name) {
  const std::string n = lower(name);
  if (n == "human") return Label::kHuman;
  if (n == "ai") return Label::kAi;
  return std::nullopt;
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::kHumanWritten ? "human_written" : "ai_generated";
}

std::size_t LabeledCorpus::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [label](const Sample& s) { return s.label == label; }));
}

}  // namespace dna
