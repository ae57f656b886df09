/* C interface to the dnadetect library.
 *
 * All functions return a dna_status. On failure a message is available from
 * dna_last_error() on the calling thread until the next call on that thread.
 * Handles are opaque; release them with the matching *_free function.
 * Strings returned through char** are heap-allocated and released with
 * dna_string_free(). Handles may be shared across threads for reading.
 */
#ifndef DNADETECT_H
#define DNADETECT_H

#include <stddef.h>
#include <stdint.h>

#if defined(DNA_BUILDING_LIBRARY)
#define DNA_API __attribute__((visibility("default")))
#else
#define DNA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dna_status {
  DNA_OK = 0,
  DNA_ERR_INVALID_ARGUMENT = 1,
  DNA_ERR_EMPTY_INPUT = 2,
  DNA_ERR_VOCAB_MISMATCH = 3,
  DNA_ERR_PROVIDER_UNAVAILABLE = 4,
  DNA_ERR_CORPUS_TOO_SMALL = 5,
  DNA_ERR_MODE_UNSUPPORTED = 6,
  DNA_ERR_INVALID_REPAIR_SET = 7,
  DNA_ERR_DEGENERATE_DENOMINATOR = 8,
  DNA_ERR_MISSING_SEED = 9,
  DNA_ERR_NON_FINITE_SCORE = 10,
  DNA_ERR_SINGLE_CLASS = 11,
  DNA_ERR_PARSE = 12,
  DNA_ERR_MISSING_FIELD = 13,
  DNA_ERR_IO = 14,
  DNA_ERR_EMPTY_AFTER_DELETION = 15,
  DNA_ERR_INTERNAL = 99
} dna_status;

typedef enum dna_xppl_mode { DNA_XPPL_POINTWISE = 0, DNA_XPPL_FULL_VOCAB = 1 } dna_xppl_mode;

typedef enum dna_strategy {
  DNA_STRATEGY_CLOSED_FORM = 0,
  DNA_STRATEGY_LOW_TO_HIGH = 1,
  DNA_STRATEGY_HIGH_TO_LOW = 2,
  DNA_STRATEGY_SEQUENTIAL = 3,
  DNA_STRATEGY_RANDOM = 4
} dna_strategy;

typedef enum dna_label { DNA_LABEL_NONE = -1, DNA_LABEL_HUMAN = 0, DNA_LABEL_AI = 1 } dna_label;

typedef enum dna_verdict { DNA_VERDICT_HUMAN_WRITTEN = 0, DNA_VERDICT_AI_GENERATED = 1 } dna_verdict;

typedef enum dna_attack_kind {
  DNA_ATTACK_INSERTION = 0,
  DNA_ATTACK_DELETION = 1,
  DNA_ATTACK_SUBSTITUTION = 2
} dna_attack_kind;

typedef enum dna_objective { DNA_OBJECTIVE_MAX_F1 = 0, DNA_OBJECTIVE_TARGET_FPR = 1 } dna_objective;

typedef struct dna_ngram dna_ngram;
typedef struct dna_provider dna_provider;
typedef struct dna_corpus dna_corpus;
typedef struct dna_trajectory dna_trajectory;
typedef struct dna_report dna_report;

DNA_API const char* dna_version(void);
DNA_API const char* dna_status_name(dna_status status);
DNA_API const char* dna_last_error(void);
DNA_API void dna_string_free(char* s);

/* Name lookups. Unknown names give DNA_ERR_INVALID_ARGUMENT. */
DNA_API dna_status dna_strategy_parse(const char* name, dna_strategy* out);
DNA_API const char* dna_strategy_name(dna_strategy strategy);
DNA_API dna_status dna_attack_kind_parse(const char* name, dna_attack_kind* out);
DNA_API dna_status dna_xppl_mode_parse(const char* name, dna_xppl_mode* out);
DNA_API const char* dna_verdict_name(dna_verdict verdict);

/* ---- n-gram models ---- */

typedef struct dna_ngram_options {
  unsigned order;
  double alpha;
  size_t min_tokens; /* 0 = 10 * vocabulary size */
} dna_ngram_options;

typedef struct dna_ngram_info {
  unsigned order;
  double alpha;
  size_t vocab_size;
  size_t context_count;
  uint64_t fingerprint;
} dna_ngram_info;

DNA_API void dna_ngram_options_init(dna_ngram_options* options);
/* Trains a byte-level model on n documents given as (pointer, length). */
DNA_API dna_status dna_ngram_train(const char* const* docs, const size_t* lengths, size_t n,
                                   const dna_ngram_options* options, dna_ngram** out);
DNA_API dna_status dna_ngram_load(const char* path, dna_ngram** out);
DNA_API dna_status dna_ngram_save(const dna_ngram* model, const char* path);
DNA_API dna_status dna_ngram_info_get(const dna_ngram* model, dna_ngram_info* out);
/* Generates `length` bytes continuing `prompt`; temperature 0 is greedy.
 * The result may contain NUL bytes; its length is stored in *out_len. */
DNA_API dna_status dna_ngram_sample(const dna_ngram* model, size_t length, double temperature,
                                    uint64_t seed, const char* prompt, size_t prompt_len,
                                    char** out, size_t* out_len);
DNA_API void dna_ngram_free(dna_ngram* model);

/* ---- providers ---- */

typedef struct dna_remote_config {
  const char* url;
  uint32_t timeout_ms;
  uint32_t retries;
  uint32_t max_in_flight;
  size_t max_tokens;
  size_t vocab_size; /* 0 = unknown */
} dna_remote_config;

typedef struct dna_provider_info {
  const char* reference_id; /* owned by the provider handle */
  const char* observer_id;
  size_t vocab_size;
  int supports_full_xent;
  size_t max_tokens;
} dna_provider_info;

/* The provider keeps its own references; the model handles may be freed
 * afterwards. observer may be NULL to reuse the reference model. */
DNA_API dna_status dna_provider_ngram(const dna_ngram* reference, const dna_ngram* observer,
                                      size_t max_tokens, dna_provider** out);
DNA_API void dna_remote_config_init(dna_remote_config* config);
DNA_API dna_status dna_provider_remote(const dna_remote_config* config, dna_provider** out);
DNA_API dna_status dna_provider_table_json(const char* json, dna_provider** out);
DNA_API dna_status dna_provider_info_get(const dna_provider* provider, dna_provider_info* out);
/* Number of analysis passes made through this handle. */
DNA_API uint64_t dna_provider_analyze_calls(const dna_provider* provider);
DNA_API void dna_provider_reset_calls(dna_provider* provider);
DNA_API void dna_provider_free(dna_provider* provider);

/* ---- scoring ---- */

typedef struct dna_score_options {
  dna_xppl_mode xppl_mode;
  size_t truncation;
  dna_strategy strategy;
  int has_seed;
  uint64_t seed;
  size_t permutations;
} dna_score_options;

typedef struct dna_score {
  double repair_score;
  double sigma_s;
  double sigma_ideal;
  double log_ppl;
  double x_ppl;
  size_t mutated_count;
  size_t scored_length;
} dna_score;

DNA_API void dna_score_options_init(dna_score_options* options);
DNA_API dna_status dna_score_text(const dna_provider* provider, const char* text, size_t len,
                                  const dna_score_options* options, dna_score* out);
/* Scores sample `index` of a corpus, using its token ids when present. */
DNA_API dna_status dna_score_sample(const dna_provider* provider, const dna_corpus* corpus, size_t index,
                                    const dna_score_options* options, dna_score* out);

DNA_API dna_status dna_classify(double repair_score, double threshold, dna_verdict* out);

/* Trajectory of a single text. options->strategy must not be closed-form. */
DNA_API dna_status dna_trajectory_text(const dna_provider* provider, const char* text, size_t len,
                                       const dna_score_options* options, dna_trajectory** out);
DNA_API size_t dna_trajectory_size(const dna_trajectory* trajectory);
DNA_API const double* dna_trajectory_scores(const dna_trajectory* trajectory);
DNA_API double dna_trajectory_repair_score(const dna_trajectory* trajectory);
/* "t,sigma" CSV. */
DNA_API dna_status dna_trajectory_csv(const dna_trajectory* trajectory, char** out);
DNA_API void dna_trajectory_free(dna_trajectory* trajectory);

/* ---- metrics and calibration ---- */

typedef struct dna_calibration {
  double threshold;
  dna_objective objective;
  double target_fpr;
  double achieved;
  size_t n_samples;
} dna_calibration;

/* labels: DNA_LABEL_HUMAN or DNA_LABEL_AI per score. */
DNA_API dna_status dna_auroc(const double* repair_scores, const int* labels, size_t n, double* out);
DNA_API dna_status dna_f1_max(const double* repair_scores, const int* labels, size_t n, double* f1,
                              double* threshold);
DNA_API dna_status dna_calibrate(const double* repair_scores, const int* labels, size_t n,
                                 dna_objective objective, double target_fpr, dna_calibration* out);
DNA_API dna_status dna_calibration_to_json(const dna_calibration* calibration, char** out);
DNA_API dna_status dna_calibration_from_json(const char* json, dna_calibration* out);

/* ---- corpora ---- */

DNA_API dna_status dna_corpus_load(const char* path, int require_labels, dna_corpus** out);
DNA_API dna_status dna_corpus_parse(const char* data, size_t len, int require_labels, dna_corpus** out);
DNA_API size_t dna_corpus_size(const dna_corpus* corpus);
DNA_API const char* dna_corpus_id(const dna_corpus* corpus, size_t index);
DNA_API dna_label dna_corpus_label(const dna_corpus* corpus, size_t index);
DNA_API void dna_corpus_free(dna_corpus* corpus);

/* JSONL with AI-labeled samples edited by the attack; each line carries an
 * "attack" field. */
DNA_API dna_status dna_attack_corpus_jsonl(const dna_corpus* corpus, dna_attack_kind kind, double rate,
                                           uint64_t seed, char** out);

/* ---- evaluation ---- */

typedef struct dna_eval_options {
  dna_xppl_mode xppl_mode;
  size_t truncation;
  int has_attack;
  dna_attack_kind attack_kind;
  double attack_rate;
  uint64_t attack_seed;
  int has_fixed_threshold;
  double fixed_threshold;
  dna_strategy strategy;
  int has_seed;
  uint64_t seed;
  size_t permutations;
  unsigned workers;
} dna_eval_options;

typedef struct dna_metrics {
  double auroc;
  double f1_max;
  double f1_max_threshold;
  int has_f1_fixed;
  double f1_fixed;
  size_t n_samples;
} dna_metrics;

DNA_API void dna_eval_options_init(dna_eval_options* options);
DNA_API dna_status dna_evaluate(const dna_corpus* corpus, const dna_provider* provider,
                                const dna_eval_options* options, dna_report** out);
DNA_API dna_status dna_report_metrics(const dna_report* report, dna_metrics* out);
/* cli_config_json may be NULL; otherwise it is embedded under config.cli. */
DNA_API dna_status dna_report_json(const dna_report* report, const char* cli_config_json, char** out);
DNA_API dna_status dna_report_csv(const dna_report* report, char** out);
DNA_API void dna_report_free(dna_report* report);

#ifdef __cplusplus
}
#endif

#endif /* DNADETECT_H */
