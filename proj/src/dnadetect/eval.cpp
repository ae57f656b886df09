#include "dnadetect/eval.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dnadetect/corpus.hpp"
#include "dnadetect/detector.hpp"
#include "dnadetect/metrics.hpp"
#include "dnadetect/numeric.hpp"
#include "dnadetect/repair.hpp"
#include "dnadetect/tokenizer.hpp"

namespace dna {

using nlohmann::ordered_json;

std::uint64_t sample_seed(std::uint64_t run_seed, std::size_t ordinal) {
  return splitmix64(run_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(ordinal) + 1));
}

ScoreSummary summarize(const PositionAnalysis& analysis, XentMode mode, RepairStrategy strategy,
                       std::optional<std::uint64_t> seed, std::size_t permutations) {
  ScoreSummary s;
  s.components = score_components(analysis, mode);
  s.mutated_count = analysis.mutated_count();
  s.scored_length = analysis.scored_length();
  switch (strategy) {
    case RepairStrategy::kClosedForm:
      s.repair_score = 0.5 * (s.components.sigma + s.components.sigma_ideal);
      break;
    case RepairStrategy::kRandom:
      if (!seed) fail(ErrorCode::kMissingSeed, "random strategy needs a seed");
      s.repair_score = repair_score_random_avg(analysis, permutations, *seed, mode);
      break;
    default:
      s.repair_score = repair_score_trajectory(build_trajectory(analysis, strategy, seed, mode));
      break;
  }
  return s;
}

PreparedSample prepare_sample(const Provider& provider, const Sample& sample, const EvalOptions& options,
                              std::size_t ordinal) {
  const bool full = options.x_ppl_mode == XentMode::kFullVocab;
  if (full && !provider.pair().supports_full_cross_entropy) {
    fail(ErrorCode::kModeUnsupported, "provider does not supply full-vocabulary cross entropy");
  }
  if (options.truncation < 1) fail(ErrorCode::kInvalidArgument, "truncation must be >= 1");
  const std::size_t cap = std::min(options.truncation, provider.pair().max_tokens);
  const bool attack = options.attack && sample.label == Label::kAi;

  if (!attack && !sample.tokens) {
    return PreparedSample{provider.analyze_text(sample.text, cap, full), 0};
  }

  TokenSequence tokens;
  if (sample.tokens) tokens.token_ids = *sample.tokens;
  else tokens = provider.tokenize(sample.text);
  tokens = truncate(tokens, cap);
  std::size_t edits = 0;
  if (attack) {
    const std::size_t vocab = provider.pair().vocab_size;
    if (vocab == 0) fail(ErrorCode::kModeUnsupported, "edit attacks need a provider with a known vocabulary");
    AttackSpec spec = *options.attack;
    spec.seed = sample_seed(spec.seed, ordinal);
    const std::size_t before = tokens.size();
    tokens = truncate(apply_edit_attack(tokens, spec, vocab), cap);
    edits = edit_count(spec.rate, before);
  }
  PositionAnalysis analysis = provider.analyze(tokens, full);
  return PreparedSample{AnalyzedText{std::move(tokens), std::move(analysis)}, edits};
}

EvalReport evaluate(const LabeledCorpus& corpus, const Provider& provider, const EvalOptions& options) {
  const std::size_t n = corpus.samples.size();
  if (n == 0) fail(ErrorCode::kEmptyInput, "corpus is empty");
  for (const Sample& s : corpus.samples) {
    if (!s.label) fail(ErrorCode::kMissingField, "sample " + s.id + ": missing label");
  }
  if (corpus.count(Label::kAi) == 0 || corpus.count(Label::kHuman) == 0) {
    fail(ErrorCode::kSingleClass, "evaluation corpus needs both human and ai samples");
  }
  if (options.strategy == RepairStrategy::kRandom && !options.seed) {
    fail(ErrorCode::kMissingSeed, "random strategy needs a seed");
  }

  std::vector<std::optional<SampleResult>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const Sample& sample = corpus.samples[i];
      try {
        PreparedSample prepared = prepare_sample(provider, sample, options, i);
        std::optional<std::uint64_t> seed;
        if (options.seed) seed = sample_seed(*options.seed, i);
        const ScoreSummary summary = summarize(prepared.analyzed.analysis, options.x_ppl_mode,
                                               options.strategy, seed, options.permutations);
        SampleResult r;
        r.id = sample.id;
        r.label = *sample.label;
        r.repair_score = summary.repair_score;
        r.sigma_s = summary.components.sigma;
        r.sigma_ideal = summary.components.sigma_ideal;
        r.log_ppl = summary.components.log_ppl;
        r.x_ppl = summary.components.x_ppl;
        r.mutated_count = summary.mutated_count;
        r.scored_length = summary.scored_length;
        r.edits = prepared.edits;
        slots[i] = std::move(r);
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(Error(e.code(), "sample " + sample.id + ": " + e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);  // lowest sample index first
  }

  EvalReport report;
  report.provider = provider.pair();
  report.options = options;
  report.per_sample.reserve(n);
  std::vector<double> repair_scores;
  std::vector<double> detection_scores;
  std::vector<Label> labels;
  for (auto& slot : slots) {
    repair_scores.push_back(slot->repair_score);
    detection_scores.push_back(-slot->repair_score);
    labels.push_back(slot->label);
    report.per_sample.push_back(std::move(*slot));
  }
  report.auroc = auroc(detection_scores, labels);
  const F1Max best = f1_max(repair_scores, labels);
  report.f1_max = best.f1;
  report.f1_max_threshold = best.threshold;
  if (options.fixed_threshold) report.f1_fixed = f1_score(repair_scores, labels, *options.fixed_threshold);

  const double tau = options.fixed_threshold.value_or(best.threshold);
  for (SampleResult& r : report.per_sample) r.verdict = classify(r.repair_score, tau);
  return report;
}

std::string report_to_json(const EvalReport& report, std::string_view cli_config_json) {
  const EvalOptions& o = report.options;
  ordered_json config;
  config["reference_id"] = report.provider.reference_id;
  config["observer_id"] = report.provider.observer_id;
  config["vocab_size"] = report.provider.vocab_size;
  config["max_tokens"] = report.provider.max_tokens;
  config["x_ppl_mode"] = to_string(o.x_ppl_mode);
  config["truncation"] = o.truncation;
  config["strategy"] = to_string(o.strategy);
  config["seed"] = o.seed ? ordered_json(*o.seed) : ordered_json(nullptr);
  config["permutations"] = o.permutations;
  if (o.attack) {
    config["attack"] = {{"kind", to_string(o.attack->kind)}, {"rate", o.attack->rate}, {"seed", o.attack->seed}};
  } else {
    config["attack"] = nullptr;
  }
  config["fixed_threshold"] = o.fixed_threshold ? ordered_json(*o.fixed_threshold) : ordered_json(nullptr);
  if (!cli_config_json.empty()) config["cli"] = ordered_json::parse(cli_config_json);

  ordered_json per_sample = ordered_json::array();
  for (const SampleResult& r : report.per_sample) {
    ordered_json row;
    row["id"] = r.id;
    row["label"] = to_string(r.label);
    row["repair_score"] = r.repair_score;
    row["sigma_s"] = r.sigma_s;
    row["sigma_ideal"] = r.sigma_ideal;
    row["log_ppl"] = r.log_ppl;
    row["x_ppl"] = r.x_ppl;
    row["T"] = r.mutated_count;
    row["L"] = r.scored_length;
    if (r.edits > 0) row["edits"] = r.edits;
    row["verdict"] = to_string(r.verdict);
    per_sample.push_back(std::move(row));
  }

  ordered_json j;
  j["auroc"] = report.auroc;
  j["f1_max"] = report.f1_max;
  j["f1_max_threshold"] = report.f1_max_threshold;
  j["f1_fixed"] = report.f1_fixed ? ordered_json(*report.f1_fixed) : ordered_json(nullptr);
  j["n_samples"] = report.per_sample.size();
  j["config"] = std::move(config);
  j["per_sample"] = std::move(per_sample);
  return j.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "id,label,repair_score,sigma_s,sigma_ideal,T,verdict\n";
  for (const SampleResult& r : report.per_sample) {
    out << csv_field(r.id) << ',' << to_string(r.label) << ',' << format_double(r.repair_score) << ','
        << format_double(r.sigma_s) << ',' << format_double(r.sigma_ideal) << ',' << r.mutated_count << ','
        << to_string(r.verdict) << '\n';
  }
  return out.str();
}

std::string attack_corpus_jsonl(const LabeledCorpus& corpus, const AttackSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    const Sample& original = corpus.samples[i];
    if (original.label != Label::kAi) {
      out += to_jsonl_line(original, R"({"attack": null})");
      out += '\n';
      continue;
    }
    TokenSequence tokens;
    if (original.tokens) tokens.token_ids = *original.tokens;
    else tokens = ByteTokenizer::tokenize(original.text);
    AttackSpec local = spec;
    local.seed = sample_seed(spec.seed, i);
    Sample attacked = original;
    try {
      attacked.tokens = apply_edit_attack(tokens, local, ByteTokenizer::kVocabSize).token_ids;
    } catch (const Error& e) {
      fail(e.code(), "sample " + original.id + ": " + e.what());
    }
    attacked.text = ByteTokenizer::detokenize(*attacked.tokens);
    ordered_json meta;
    meta["attack"] = {{"kind", to_string(spec.kind)},
                      {"rate", spec.rate},
                      {"seed", spec.seed},
                      {"edits", edit_count(spec.rate, tokens.size())}};
    out += to_jsonl_line(attacked, meta.dump());
    out += '\n';
  }
  return out;
}

}  // namespace dna
