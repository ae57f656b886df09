#include "dnadetect/dnadetect.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "dnadetect/attacks.hpp"
#include "dnadetect/corpus.hpp"
#include "dnadetect/detector.hpp"
#include "dnadetect/eval.hpp"
#include "dnadetect/metrics.hpp"
#include "dnadetect/ngram.hpp"
#include "dnadetect/numeric.hpp"
#include "dnadetect/providers.hpp"
#include "dnadetect/remote.hpp"
#include "dnadetect/repair.hpp"
#include "dnadetect/tokenizer.hpp"

struct dna_ngram {
  std::shared_ptr<const dna::NgramModel> model;
};

struct dna_provider {
  std::shared_ptr<const dna::CountingProvider> provider;
};

struct dna_corpus {
  dna::LabeledCorpus corpus;
};

struct dna_trajectory {
  dna::RepairTrajectory trajectory;
};

struct dna_report {
  dna::EvalReport report;
};

namespace {

thread_local std::string last_error;

dna_status status_for(dna::ErrorCode code) { return static_cast<dna_status>(static_cast<int>(code) + 1); }

template <typename F>
dna_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return DNA_OK;
  } catch (const dna::Error& e) {
    last_error = e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return DNA_ERR_INTERNAL;
}

void require(bool condition, const char* what) {
  if (!condition) dna::fail(dna::ErrorCode::kInvalidArgument, what);
}

char* copy_out(const std::string& s) {
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (buf == nullptr) throw std::bad_alloc();
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  return buf;
}

dna::RepairStrategy to_strategy(dna_strategy s) {
  switch (s) {
    case DNA_STRATEGY_CLOSED_FORM: return dna::RepairStrategy::kClosedForm;
    case DNA_STRATEGY_LOW_TO_HIGH: return dna::RepairStrategy::kLowToHigh;
    case DNA_STRATEGY_HIGH_TO_LOW: return dna::RepairStrategy::kHighToLow;
    case DNA_STRATEGY_SEQUENTIAL: return dna::RepairStrategy::kSequential;
    case DNA_STRATEGY_RANDOM: return dna::RepairStrategy::kRandom;
  }
  dna::fail(dna::ErrorCode::kInvalidArgument, "unknown strategy");
}

dna::XentMode to_mode(dna_xppl_mode m) {
  if (m == DNA_XPPL_POINTWISE) return dna::XentMode::kPointwise;
  if (m == DNA_XPPL_FULL_VOCAB) return dna::XentMode::kFullVocab;
  dna::fail(dna::ErrorCode::kInvalidArgument, "unknown cross-perplexity mode");
}

dna::AttackKind to_attack(dna_attack_kind k) {
  switch (k) {
    case DNA_ATTACK_INSERTION: return dna::AttackKind::kInsertion;
    case DNA_ATTACK_DELETION: return dna::AttackKind::kDeletion;
    case DNA_ATTACK_SUBSTITUTION: return dna::AttackKind::kSubstitution;
  }
  dna::fail(dna::ErrorCode::kInvalidArgument, "unknown attack kind");
}

std::vector<dna::Label> to_labels(const int* labels, std::size_t n) {
  std::vector<dna::Label> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == DNA_LABEL_HUMAN) out[i] = dna::Label::kHuman;
    else if (labels[i] == DNA_LABEL_AI) out[i] = dna::Label::kAi;
    else dna::fail(dna::ErrorCode::kInvalidArgument, "label must be DNA_LABEL_HUMAN or DNA_LABEL_AI");
  }
  return out;
}

dna::EvalOptions score_eval_options(const dna_score_options& o) {
  dna::EvalOptions e;
  e.x_ppl_mode = to_mode(o.xppl_mode);
  e.truncation = o.truncation;
  e.strategy = to_strategy(o.strategy);
  e.permutations = o.permutations;
  return e;
}

void fill_score(const dna::ScoreSummary& s, dna_score* out) {
  out->repair_score = s.repair_score;
  out->sigma_s = s.components.sigma;
  out->sigma_ideal = s.components.sigma_ideal;
  out->log_ppl = s.components.log_ppl;
  out->x_ppl = s.components.x_ppl;
  out->mutated_count = s.mutated_count;
  out->scored_length = s.scored_length;
}

dna_calibration to_c(const dna::CalibrationResult& r) {
  dna_calibration c;
  c.threshold = r.threshold;
  c.objective = r.objective == dna::Objective::kMaxF1 ? DNA_OBJECTIVE_MAX_F1 : DNA_OBJECTIVE_TARGET_FPR;
  c.target_fpr = r.target_fpr;
  c.achieved = r.achieved;
  c.n_samples = r.n_samples;
  return c;
}

}  // namespace

extern "C" {

const char* dna_version(void) { return "0.1.0"; }

const char* dna_status_name(dna_status status) {
  if (status == DNA_OK) return "Ok";
  if (status == DNA_ERR_INTERNAL) return "Internal";
  const int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(dna::ErrorCode::kEmptyAfterDeletion)) return "Unknown";
  return dna::error_code_name(static_cast<dna::ErrorCode>(code)).data();
}

const char* dna_last_error(void) { return last_error.c_str(); }

void dna_string_free(char* s) { std::free(s); }

dna_status dna_strategy_parse(const char* name, dna_strategy* out) {
  return guarded([&] {
    require(name && out, "null argument");
    const auto s = dna::parse_strategy(name);
    if (!s) dna::fail(dna::ErrorCode::kInvalidArgument, std::string("unknown strategy '") + name + "'");
    *out = static_cast<dna_strategy>(static_cast<int>(*s));
  });
}

const char* dna_strategy_name(dna_strategy strategy) {
  try {
    return dna::to_string(to_strategy(strategy)).data();
  } catch (...) {
    return "unknown";
  }
}

dna_status dna_attack_kind_parse(const char* name, dna_attack_kind* out) {
  return guarded([&] {
    require(name && out, "null argument");
    const auto k = dna::parse_attack_kind(name);
    if (!k) dna::fail(dna::ErrorCode::kInvalidArgument, std::string("unknown attack '") + name + "'");
    *out = static_cast<dna_attack_kind>(static_cast<int>(*k));
  });
}

dna_status dna_xppl_mode_parse(const char* name, dna_xppl_mode* out) {
  return guarded([&] {
    require(name && out, "null argument");
    const auto m = dna::parse_xent_mode(name);
    if (!m) dna::fail(dna::ErrorCode::kInvalidArgument, std::string("unknown cross-perplexity mode '") + name + "'");
    *out = static_cast<dna_xppl_mode>(static_cast<int>(*m));
  });
}

const char* dna_verdict_name(dna_verdict verdict) {
  return verdict == DNA_VERDICT_HUMAN_WRITTEN ? "human_written" : "ai_generated";
}

void dna_ngram_options_init(dna_ngram_options* options) {
  if (!options) return;
  const dna::NgramTrainOptions d;
  options->order = d.order;
  options->alpha = d.alpha;
  options->min_tokens = 0;
}

dna_status dna_ngram_train(const char* const* docs, const size_t* lengths, size_t n,
                           const dna_ngram_options* options, dna_ngram** out) {
  return guarded([&] {
    require(out && (n == 0 || (docs && lengths)), "null argument");
    dna::NgramTrainOptions opts;
    if (options) {
      opts.order = options->order;
      opts.alpha = options->alpha;
      if (options->min_tokens > 0) opts.min_tokens = options->min_tokens;
    }
    std::vector<std::vector<dna::TokenId>> documents;
    documents.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<dna::TokenId> doc(lengths[i]);
      for (size_t j = 0; j < lengths[i]; ++j) doc[j] = static_cast<unsigned char>(docs[i][j]);
      documents.push_back(std::move(doc));
    }
    auto model = std::make_shared<const dna::NgramModel>(dna::train_ngram(documents, opts));
    *out = new dna_ngram{std::move(model)};
  });
}

dna_status dna_ngram_load(const char* path, dna_ngram** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new dna_ngram{std::make_shared<const dna::NgramModel>(dna::NgramModel::load(path))};
  });
}

dna_status dna_ngram_save(const dna_ngram* model, const char* path) {
  return guarded([&] {
    require(model && path, "null argument");
    model->model->save(path);
  });
}

dna_status dna_ngram_info_get(const dna_ngram* model, dna_ngram_info* out) {
  return guarded([&] {
    require(model && out, "null argument");
    const dna::NgramModel& m = *model->model;
    out->order = m.order();
    out->alpha = m.alpha();
    out->vocab_size = m.vocab_size();
    out->context_count = m.context_count();
    out->fingerprint = m.fingerprint();
  });
}

dna_status dna_ngram_sample(const dna_ngram* model, size_t length, double temperature, uint64_t seed,
                            const char* prompt, size_t prompt_len, char** out, size_t* out_len) {
  return guarded([&] {
    require(model && out && (prompt_len == 0 || prompt), "null argument");
    std::vector<dna::TokenId> context(prompt_len);
    for (size_t i = 0; i < prompt_len; ++i) context[i] = static_cast<unsigned char>(prompt[i]);
    const dna::TokenSequence drawn = dna::sample(*model->model, length, temperature, seed, context);
    const std::string text = dna::ByteTokenizer::detokenize(drawn.token_ids);
    *out = copy_out(text);
    if (out_len) *out_len = text.size();
  });
}

void dna_ngram_free(dna_ngram* model) { delete model; }

dna_status dna_provider_ngram(const dna_ngram* reference, const dna_ngram* observer, size_t max_tokens,
                              dna_provider** out) {
  return guarded([&] {
    require(reference && out, "null argument");
    auto inner = std::make_shared<const dna::NgramProvider>(
        reference->model, observer ? observer->model : reference->model,
        max_tokens == 0 ? dna::kDefaultMaxTokens : max_tokens);
    *out = new dna_provider{std::make_shared<const dna::CountingProvider>(std::move(inner))};
  });
}

void dna_remote_config_init(dna_remote_config* config) {
  if (!config) return;
  const dna::RemoteConfig d;
  config->url = nullptr;
  config->timeout_ms = d.timeout_ms;
  config->retries = d.retries;
  config->max_in_flight = d.max_in_flight;
  config->max_tokens = d.max_tokens;
  config->vocab_size = 0;
}

dna_status dna_provider_remote(const dna_remote_config* config, dna_provider** out) {
  return guarded([&] {
    require(config && out, "null argument");
    if (!config->url || !*config->url) dna::fail(dna::ErrorCode::kProviderUnavailable, "no provider URL given");
    dna::RemoteConfig rc;
    rc.url = config->url;
    rc.timeout_ms = config->timeout_ms;
    rc.retries = config->retries;
    rc.max_in_flight = config->max_in_flight;
    rc.max_tokens = config->max_tokens == 0 ? dna::kDefaultMaxTokens : config->max_tokens;
    if (config->vocab_size > 0) rc.vocab_size = config->vocab_size;
    auto inner = std::make_shared<const dna::RemoteProvider>(std::move(rc));
    *out = new dna_provider{std::make_shared<const dna::CountingProvider>(std::move(inner))};
  });
}

dna_status dna_provider_table_json(const char* json, dna_provider** out) {
  return guarded([&] {
    require(json && out, "null argument");
    auto inner = std::make_shared<const dna::TableProvider>(dna::TableProvider::from_json(json));
    *out = new dna_provider{std::make_shared<const dna::CountingProvider>(std::move(inner))};
  });
}

dna_status dna_provider_info_get(const dna_provider* provider, dna_provider_info* out) {
  return guarded([&] {
    require(provider && out, "null argument");
    const dna::ProviderPair& p = provider->provider->pair();
    out->reference_id = p.reference_id.c_str();
    out->observer_id = p.observer_id.c_str();
    out->vocab_size = p.vocab_size;
    out->supports_full_xent = p.supports_full_cross_entropy ? 1 : 0;
    out->max_tokens = p.max_tokens;
  });
}

uint64_t dna_provider_analyze_calls(const dna_provider* provider) {
  return provider ? provider->provider->calls() : 0;
}

void dna_provider_reset_calls(dna_provider* provider) {
  if (provider) provider->provider->reset();
}

void dna_provider_free(dna_provider* provider) { delete provider; }

void dna_score_options_init(dna_score_options* options) {
  if (!options) return;
  options->xppl_mode = DNA_XPPL_POINTWISE;
  options->truncation = dna::kDefaultMaxTokens;
  options->strategy = DNA_STRATEGY_CLOSED_FORM;
  options->has_seed = 0;
  options->seed = 0;
  options->permutations = 1;
}

dna_status dna_score_text(const dna_provider* provider, const char* text, size_t len,
                          const dna_score_options* options, dna_score* out) {
  return guarded([&] {
    require(provider && options && out && (len == 0 || text), "null argument");
    const dna::EvalOptions eo = score_eval_options(*options);
    dna::Sample sample;
    sample.text.assign(text ? text : "", len);
    const dna::PreparedSample prepared = dna::prepare_sample(*provider->provider, sample, eo, 0);
    std::optional<std::uint64_t> seed;
    if (options->has_seed) seed = options->seed;
    fill_score(dna::summarize(prepared.analyzed.analysis, eo.x_ppl_mode, eo.strategy, seed, eo.permutations),
               out);
  });
}

dna_status dna_score_sample(const dna_provider* provider, const dna_corpus* corpus, size_t index,
                            const dna_score_options* options, dna_score* out) {
  return guarded([&] {
    require(provider && corpus && options && out, "null argument");
    require(index < corpus->corpus.samples.size(), "sample index out of range");
    const dna::EvalOptions eo = score_eval_options(*options);
    const dna::Sample& sample = corpus->corpus.samples[index];
    try {
      const dna::PreparedSample prepared = dna::prepare_sample(*provider->provider, sample, eo, index);
      std::optional<std::uint64_t> seed;
      if (options->has_seed) seed = dna::sample_seed(options->seed, index);
      fill_score(
          dna::summarize(prepared.analyzed.analysis, eo.x_ppl_mode, eo.strategy, seed, eo.permutations), out);
    } catch (const dna::Error& e) {
      dna::fail(e.code(), "sample " + sample.id + ": " + e.what());
    }
  });
}

dna_status dna_classify(double repair_score, double threshold, dna_verdict* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = dna::classify(repair_score, threshold) == dna::Verdict::kHumanWritten ? DNA_VERDICT_HUMAN_WRITTEN
                                                                                  : DNA_VERDICT_AI_GENERATED;
  });
}

dna_status dna_trajectory_text(const dna_provider* provider, const char* text, size_t len,
                               const dna_score_options* options, dna_trajectory** out) {
  return guarded([&] {
    require(provider && options && out && (len == 0 || text), "null argument");
    const dna::EvalOptions eo = score_eval_options(*options);
    if (eo.strategy == dna::RepairStrategy::kClosedForm) {
      dna::fail(dna::ErrorCode::kInvalidArgument, "closed-form has no trajectory; pick a repair order");
    }
    dna::Sample sample;
    sample.text.assign(text ? text : "", len);
    std::optional<std::uint64_t> seed;
    if (options->has_seed) seed = options->seed;
    if (eo.strategy == dna::RepairStrategy::kRandom && !seed) {
      dna::fail(dna::ErrorCode::kMissingSeed, "random strategy needs a seed");
    }
    const dna::PreparedSample prepared = dna::prepare_sample(*provider->provider, sample, eo, 0);
    *out = new dna_trajectory{
        dna::build_trajectory(prepared.analyzed.analysis, eo.strategy, seed, eo.x_ppl_mode)};
  });
}

size_t dna_trajectory_size(const dna_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.scores.size() : 0;
}

const double* dna_trajectory_scores(const dna_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.scores.data() : nullptr;
}

double dna_trajectory_repair_score(const dna_trajectory* trajectory) {
  return trajectory ? dna::repair_score_trajectory(trajectory->trajectory) : std::nan("");
}

dna_status dna_trajectory_csv(const dna_trajectory* trajectory, char** out) {
  return guarded([&] {
    require(trajectory && out, "null argument");
    std::string csv = "t,sigma\n";
    const auto& scores = trajectory->trajectory.scores;
    for (size_t t = 0; t < scores.size(); ++t) {
      csv += std::to_string(t);
      csv += ',';
      csv += dna::format_double(scores[t]);
      csv += '\n';
    }
    *out = copy_out(csv);
  });
}

void dna_trajectory_free(dna_trajectory* trajectory) { delete trajectory; }

dna_status dna_auroc(const double* repair_scores, const int* labels, size_t n, double* out) {
  return guarded([&] {
    require(out && (n == 0 || (repair_scores && labels)), "null argument");
    std::vector<double> detection(n);
    for (size_t i = 0; i < n; ++i) detection[i] = -repair_scores[i];
    *out = dna::auroc(detection, to_labels(labels, n));
  });
}

dna_status dna_f1_max(const double* repair_scores, const int* labels, size_t n, double* f1, double* threshold) {
  return guarded([&] {
    require(n == 0 || (repair_scores && labels), "null argument");
    const dna::F1Max best = dna::f1_max(std::span<const double>(repair_scores, n), to_labels(labels, n));
    if (f1) *f1 = best.f1;
    if (threshold) *threshold = best.threshold;
  });
}

dna_status dna_calibrate(const double* repair_scores, const int* labels, size_t n, dna_objective objective,
                         double target_fpr, dna_calibration* out) {
  return guarded([&] {
    require(out && (n == 0 || (repair_scores && labels)), "null argument");
    const auto obj = objective == DNA_OBJECTIVE_MAX_F1 ? dna::Objective::kMaxF1 : dna::Objective::kTargetFpr;
    *out = to_c(dna::calibrate(std::span<const double>(repair_scores, n), to_labels(labels, n), obj, target_fpr));
  });
}

dna_status dna_calibration_to_json(const dna_calibration* calibration, char** out) {
  return guarded([&] {
    require(calibration && out, "null argument");
    dna::CalibrationResult r;
    r.threshold = calibration->threshold;
    r.objective = calibration->objective == DNA_OBJECTIVE_MAX_F1 ? dna::Objective::kMaxF1
                                                                 : dna::Objective::kTargetFpr;
    r.target_fpr = calibration->target_fpr;
    r.achieved = calibration->achieved;
    r.n_samples = calibration->n_samples;
    *out = copy_out(dna::to_json(r));
  });
}

dna_status dna_calibration_from_json(const char* json, dna_calibration* out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = to_c(dna::calibration_from_json(json));
  });
}

dna_status dna_corpus_load(const char* path, int require_labels, dna_corpus** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new dna_corpus{dna::load_jsonl(path, require_labels != 0)};
  });
}

dna_status dna_corpus_parse(const char* data, size_t len, int require_labels, dna_corpus** out) {
  return guarded([&] {
    require(out && (len == 0 || data), "null argument");
    std::istringstream in(std::string(data ? data : "", len));
    *out = new dna_corpus{dna::parse_jsonl(in, require_labels != 0)};
  });
}

size_t dna_corpus_size(const dna_corpus* corpus) { return corpus ? corpus->corpus.samples.size() : 0; }

const char* dna_corpus_id(const dna_corpus* corpus, size_t index) {
  if (!corpus || index >= corpus->corpus.samples.size()) return nullptr;
  return corpus->corpus.samples[index].id.c_str();
}

dna_label dna_corpus_label(const dna_corpus* corpus, size_t index) {
  if (!corpus || index >= corpus->corpus.samples.size()) return DNA_LABEL_NONE;
  const auto& label = corpus->corpus.samples[index].label;
  if (!label) return DNA_LABEL_NONE;
  return *label == dna::Label::kAi ? DNA_LABEL_AI : DNA_LABEL_HUMAN;
}

void dna_corpus_free(dna_corpus* corpus) { delete corpus; }

dna_status dna_attack_corpus_jsonl(const dna_corpus* corpus, dna_attack_kind kind, double rate, uint64_t seed,
                                   char** out) {
  return guarded([&] {
    require(corpus && out, "null argument");
    *out = copy_out(dna::attack_corpus_jsonl(corpus->corpus, dna::AttackSpec{to_attack(kind), rate, seed}));
  });
}

void dna_eval_options_init(dna_eval_options* options) {
  if (!options) return;
  const dna::EvalOptions d;
  options->xppl_mode = DNA_XPPL_POINTWISE;
  options->truncation = d.truncation;
  options->has_attack = 0;
  options->attack_kind = DNA_ATTACK_SUBSTITUTION;
  options->attack_rate = 0.01;
  options->attack_seed = 0;
  options->has_fixed_threshold = 0;
  options->fixed_threshold = 0.0;
  options->strategy = DNA_STRATEGY_CLOSED_FORM;
  options->has_seed = 0;
  options->seed = 0;
  options->permutations = 1;
  options->workers = 1;
}

dna_status dna_evaluate(const dna_corpus* corpus, const dna_provider* provider, const dna_eval_options* options,
                        dna_report** out) {
  return guarded([&] {
    require(corpus && provider && options && out, "null argument");
    dna::EvalOptions eo;
    eo.x_ppl_mode = to_mode(options->xppl_mode);
    eo.truncation = options->truncation;
    if (options->has_attack) {
      eo.attack = dna::AttackSpec{to_attack(options->attack_kind), options->attack_rate, options->attack_seed};
    }
    if (options->has_fixed_threshold) eo.fixed_threshold = options->fixed_threshold;
    eo.strategy = to_strategy(options->strategy);
    if (options->has_seed) eo.seed = options->seed;
    eo.permutations = options->permutations;
    eo.workers = options->workers;
    *out = new dna_report{dna::evaluate(corpus->corpus, *provider->provider, eo)};
  });
}

dna_status dna_report_metrics(const dna_report* report, dna_metrics* out) {
  return guarded([&] {
    require(report && out, "null argument");
    const dna::EvalReport& r = report->report;
    out->auroc = r.auroc;
    out->f1_max = r.f1_max;
    out->f1_max_threshold = r.f1_max_threshold;
    out->has_f1_fixed = r.f1_fixed ? 1 : 0;
    out->f1_fixed = r.f1_fixed.value_or(0.0);
    out->n_samples = r.per_sample.size();
  });
}

dna_status dna_report_json(const dna_report* report, const char* cli_config_json, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = copy_out(dna::report_to_json(report->report, cli_config_json ? cli_config_json : ""));
  });
}

dna_status dna_report_csv(const dna_report* report, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = copy_out(dna::report_to_csv(report->report));
  });
}

void dna_report_free(dna_report* report) { delete report; }

}  // extern "C"
