#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dnadetect/attacks.hpp"
#include "dnadetect/core.hpp"
#include "dnadetect/providers.hpp"
#include "dnadetect/scoring.hpp"

namespace dna {

struct EvalOptions {
  XentMode x_ppl_mode = XentMode::kPointwise;
  std::size_t truncation = kDefaultMaxTokens;
  std::optional<AttackSpec> attack;  // applied to AI-labeled samples only
  std::optional<double> fixed_threshold;
  RepairStrategy strategy = RepairStrategy::kClosedForm;
  std::optional<std::uint64_t> seed;  // required by the random strategy
  std::size_t permutations = 1;       // random strategy: orders averaged per sample
  unsigned workers = 1;
};

/// Per-sample seed derived from a run seed and the sample's position in the
/// corpus, so results do not depend on scheduling.
std::uint64_t sample_seed(std::uint64_t run_seed, std::size_t ordinal);

struct ScoreSummary {
  ScoreComponents components;
  double repair_score = 0.0;
  std::size_t mutated_count = 0;
  std::size_t scored_length = 0;
};

/// Repair score under a strategy (closed form unless a trajectory strategy
/// is requested). Never calls a provider.
ScoreSummary summarize(const PositionAnalysis& analysis, XentMode mode,
                       RepairStrategy strategy = RepairStrategy::kClosedForm,
                       std::optional<std::uint64_t> seed = std::nullopt, std::size_t permutations = 1);

struct PreparedSample {
  AnalyzedText analyzed;
  std::size_t edits = 0;  // > 0 only when an attack was applied
};

/// tokenize -> truncate(min(truncation, max_tokens)) -> attack (AI only) ->
/// analyze. Exactly one analysis pass on the provider.
PreparedSample prepare_sample(const Provider& provider, const Sample& sample, const EvalOptions& options,
                              std::size_t ordinal);

struct SampleResult {
  std::string id;
  Label label = Label::kHuman;
  double repair_score = 0.0;
  double sigma_s = 0.0;
  double sigma_ideal = 0.0;
  double log_ppl = 0.0;
  double x_ppl = 0.0;
  std::size_t mutated_count = 0;
  std::size_t scored_length = 0;
  std::size_t edits = 0;
  Verdict verdict = Verdict::kAiGenerated;
};

struct EvalReport {
  double auroc = 0.0;
  double f1_max = 0.0;
  double f1_max_threshold = 0.0;
  std::optional<double> f1_fixed;
  std::vector<SampleResult> per_sample;  // corpus order
  ProviderPair provider;
  EvalOptions options;
};

/// Scores every sample and aggregates metrics. Detection score for AUROC is
/// -repair_score (AI positive). Verdicts use the fixed threshold when given,
/// otherwise the F1-optimal one. Provider errors are rethrown with the sample
/// id prepended.
EvalReport evaluate(const LabeledCorpus& corpus, const Provider& provider, const EvalOptions& options);

/// Deterministic JSON; `cli_config_json`, when non-empty, is embedded under
/// config.cli.
std::string report_to_json(const EvalReport& report, std::string_view cli_config_json = {});
/// Header: id,label,repair_score,sigma_s,sigma_ideal,T,verdict
std::string report_to_csv(const EvalReport& report);

/// Applies `spec` to AI-labeled samples (byte tokenizer) and returns JSONL
/// with exact "tokens" and an "attack" field ({kind, rate, seed, edits} or
/// null for untouched samples).
std::string attack_corpus_jsonl(const LabeledCorpus& corpus, const AttackSpec& spec);

}  // namespace dna
