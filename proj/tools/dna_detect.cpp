// dna-detect: command-line front end over the dnadetect C API.
//
// stdout carries data (JSON lines, CSV, JSONL), stderr carries logs.
// Exit codes: 0 ok, 2 data or usage errors, 3 provider errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dnadetect/dnadetect.h"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;
constexpr int kExitInternal = 1;

constexpr const char* kProviderUrlEnv = "DNA_DETECT_PROVIDER_URL";

struct CliFailure {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int code, std::string message) { throw CliFailure{code, std::move(message)}; }

int exit_code_for(dna_status status) {
  switch (status) {
    case DNA_OK: return kExitOk;
    case DNA_ERR_PROVIDER_UNAVAILABLE:
    case DNA_ERR_VOCAB_MISMATCH:
    case DNA_ERR_MODE_UNSUPPORTED:
      return kExitProvider;
    case DNA_ERR_INTERNAL: return kExitInternal;
    default: return kExitData;
  }
}

void check(dna_status status) {
  if (status != DNA_OK) die(exit_code_for(status), dna_last_error());
}

// Errors while building the provider (unreadable model, bad table) are
// provider errors regardless of their code.
void check_provider(dna_status status) {
  if (status == DNA_ERR_INTERNAL) die(kExitInternal, dna_last_error());
  if (status != DNA_OK) die(kExitProvider, dna_last_error());
}

struct CString {
  char* ptr = nullptr;
  ~CString() { dna_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};

using ProviderHandle = Handle<dna_provider, dna_provider_free>;
using NgramHandle = Handle<dna_ngram, dna_ngram_free>;
using CorpusHandle = Handle<dna_corpus, dna_corpus_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitData, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
    die(kExitData, "cannot write " + path);
  }
}

// Destination "-" or empty means stdout.
void emit(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") std::cout << data << std::flush;
  else write_file(path, data);
}

// ---- options shared across subcommands ----

struct ProviderFlags {
  std::string backend = "ngram";
  std::string model;
  std::string observer;
  std::string table;
  std::string url;
  std::uint32_t timeout_ms = 30000;
  std::uint32_t retries = 2;
  std::uint32_t max_in_flight = 4;
  std::size_t vocab_size = 0;
  std::size_t max_tokens = 1024;
  std::string xppl_mode = "pointwise";
};

struct ScoreFlags {
  std::string text;
  std::string file;
  std::size_t truncate = 1024;
  std::string strategy = "closed-form";
  std::optional<std::uint64_t> seed;
  std::size_t permutations = 1;
};

struct ThresholdFlags {
  std::optional<double> threshold;
  std::string calibration;
};

struct AttackFlags {
  std::string kind;
  double rate = 0.01;
  std::uint64_t seed = 0;
};

void add_provider_flags(CLI::App* cmd, ProviderFlags& f) {
  cmd->add_option("--backend", f.backend, "Model backend")
      ->check(CLI::IsMember({"ngram", "remote", "table"}))
      ->group("Provider");
  cmd->add_option("--model", f.model, "Reference n-gram model file (.dnag)")->group("Provider");
  cmd->add_option("--observer", f.observer, "Observer n-gram model file; defaults to the reference model")
      ->group("Provider");
  cmd->add_option("--table", f.table, "Distribution table JSON for the table backend")->group("Provider");
  cmd->add_option("--provider-url", f.url, std::string("Remote service base URL (env ") + kProviderUrlEnv + ")")
      ->group("Provider");
  cmd->add_option("--provider-timeout-ms", f.timeout_ms, "Remote request timeout in milliseconds")
      ->group("Provider");
  cmd->add_option("--provider-retries", f.retries, "Remote retries after the first attempt")->group("Provider");
  cmd->add_option("--provider-max-in-flight", f.max_in_flight, "Concurrent remote requests")
      ->check(CLI::PositiveNumber)
      ->group("Provider");
  cmd->add_option("--provider-vocab-size", f.vocab_size, "Vocabulary size of the remote models; 0 = unknown")
      ->group("Provider");
  cmd->add_option("--max-tokens", f.max_tokens, "Maximum tokens per analysis")
      ->check(CLI::PositiveNumber)
      ->group("Provider");
  cmd->add_option("--xppl-mode", f.xppl_mode, "Cross-perplexity mode")
      ->check(CLI::IsMember({"pointwise", "full-vocab", "full_vocab"}))
      ->group("Provider");
}

void add_input_flags(CLI::App* cmd, ScoreFlags& f, bool allow_text) {
  if (allow_text) cmd->add_option("--text", f.text, "Text to score");
  cmd->add_option("--file", f.file, "JSONL input, one {\"text\", \"label\"?, \"id\"?} object per line");
}

void add_scoring_flags(CLI::App* cmd, ScoreFlags& f) {
  cmd->add_option("--truncate", f.truncate, "Keep at most this many tokens per text")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--strategy", f.strategy,
                  "Repair score: closed-form, or the mean trajectory of low-to-high, high-to-low, sequential, "
                  "random");
  cmd->add_option("--seed", f.seed, "Seed for the random strategy");
  cmd->add_option("--permutations", f.permutations, "Random repair orders averaged per text")
      ->check(CLI::PositiveNumber);
}

void add_threshold_flags(CLI::App* cmd, ThresholdFlags& f) {
  cmd->add_option("--threshold", f.threshold, "Decision threshold; human iff repair score > threshold");
  cmd->add_option("--calibration", f.calibration, "Calibration JSON written by `calibrate`");
}

void add_attack_flags(CLI::App* cmd, AttackFlags& f, const std::string& description) {
  cmd->add_option("--attack", f.kind, description)->check(CLI::IsMember(
      {"insert", "insertion", "delete", "deletion", "substitute", "substitution"}));
  cmd->add_option("--attack-rate", f.rate, "Fraction of tokens edited, in (0, 0.5]");
  cmd->add_option("--attack-seed", f.seed, "Seed for attack positions and tokens");
}

// ---- config file and environment ----

const std::set<std::string> kUnrecorded = {"help", "config", "workers", "out", "out-dir"};

std::string config_value(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

std::string long_name(const CLI::Option* opt) {
  const auto& names = opt->get_lnames();
  return names.empty() ? std::string() : names.front();
}

void fill_option(CLI::Option* opt, const ordered_json& value) {
  if (value.is_array()) {
    for (const auto& v : value) opt->add_result(config_value(v));
  } else {
    opt->add_result(config_value(value));
  }
  opt->run_callback();
}

// Applies environment, then config file, to options not given as flags.
void resolve_sources(CLI::App& app, CLI::App* cmd, const std::string& config_path) {
  if (auto* url = cmd->get_option_no_throw("--provider-url"); url && url->count() == 0) {
    if (const char* env = std::getenv(kProviderUrlEnv); env && *env) {
      url->add_result(env);
      url->run_callback();
    }
  }
  if (config_path.empty()) return;

  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(config_path));
  } catch (const nlohmann::json::exception& e) {
    die(kExitData, config_path + ": " + e.what());
  }
  if (!doc.is_object()) die(kExitData, config_path + ": expected a JSON object");

  std::set<std::string> known;
  std::set<std::string> commands;
  for (const CLI::App* sub : app.get_subcommands({})) {
    commands.insert(sub->get_name());
    for (const CLI::Option* opt : sub->get_options()) known.insert(long_name(opt));
  }

  const auto apply = [&](const ordered_json& object, bool scoped) {
    for (const auto& [key, value] : object.items()) {
      if (!scoped && commands.count(key) && value.is_object()) continue;
      CLI::Option* opt = cmd->get_option_no_throw("--" + key);
      if (opt == nullptr || key == "config") {
        if (scoped || !known.count(key)) die(kExitData, config_path + ": unknown key '" + key + "'");
        continue;
      }
      if (opt->count() == 0) fill_option(opt, value);
    }
  };
  if (doc.contains(cmd->get_name()) && doc[cmd->get_name()].is_object()) apply(doc[cmd->get_name()], true);
  apply(doc, false);
}

// Resolved flag values of the active command, suitable as a config file.
ordered_json resolved_config(const CLI::App* cmd) {
  ordered_json out = ordered_json::object();
  for (const CLI::Option* opt : cmd->get_options()) {
    const std::string name = long_name(opt);
    if (name.empty() || kUnrecorded.count(name)) continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_max() > 1) out[name] = results;
      else out[name] = results.back();
    } else if (!opt->get_default_str().empty()) {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

// ---- shared helpers ----

std::unique_ptr<ProviderHandle> make_provider(const ProviderFlags& f) {
  auto provider = std::make_unique<ProviderHandle>();
  if (f.backend == "ngram") {
    if (f.model.empty()) die(kExitProvider, "--model is required for the ngram backend");
    NgramHandle reference;
    NgramHandle observer;
    check_provider(dna_ngram_load(f.model.c_str(), &reference.ptr));
    if (!f.observer.empty()) check_provider(dna_ngram_load(f.observer.c_str(), &observer.ptr));
    check_provider(dna_provider_ngram(reference.ptr, observer.ptr, f.max_tokens, &provider->ptr));
  } else if (f.backend == "remote") {
    if (f.url.empty()) {
      die(kExitProvider, std::string("no provider URL; pass --provider-url or set ") + kProviderUrlEnv);
    }
    dna_remote_config config;
    dna_remote_config_init(&config);
    config.url = f.url.c_str();
    config.timeout_ms = f.timeout_ms;
    config.retries = f.retries;
    config.max_in_flight = f.max_in_flight;
    config.max_tokens = f.max_tokens;
    config.vocab_size = f.vocab_size;
    check_provider(dna_provider_remote(&config, &provider->ptr));
  } else {
    if (f.table.empty()) die(kExitProvider, "--table is required for the table backend");
    std::string json;
    try {
      json = read_file(f.table);
    } catch (const CliFailure& e) {
      die(kExitProvider, e.message);
    }
    check_provider(dna_provider_table_json(json.c_str(), &provider->ptr));
  }
  return provider;
}

dna_score_options score_options(const ProviderFlags& p, const ScoreFlags& s) {
  dna_score_options o;
  dna_score_options_init(&o);
  check(dna_xppl_mode_parse(p.xppl_mode.c_str(), &o.xppl_mode));
  check(dna_strategy_parse(s.strategy.c_str(), &o.strategy));
  o.truncation = s.truncate;
  o.permutations = s.permutations;
  if (s.seed) {
    o.has_seed = 1;
    o.seed = *s.seed;
  }
  if (o.strategy == DNA_STRATEGY_RANDOM && !o.has_seed) die(kExitData, "--strategy random requires --seed");
  return o;
}

void require_one_input(const ScoreFlags& s) {
  if (s.text.empty() == s.file.empty()) die(kExitData, "give exactly one of --text or --file");
}

ordered_json score_json(const dna_score& s) {
  ordered_json j;
  j["repair_score"] = s.repair_score;
  j["sigma_s"] = s.sigma_s;
  j["sigma_ideal"] = s.sigma_ideal;
  j["log_ppl"] = s.log_ppl;
  j["x_ppl"] = s.x_ppl;
  j["T"] = s.mutated_count;
  j["L"] = s.scored_length;
  return j;
}

std::string json_line(const ordered_json& j) {
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

struct Scored {
  std::optional<std::string> id;
  dna_label label = DNA_LABEL_NONE;
  dna_score score{};
};

// Scores --text or every sample of --file, in input order.
std::vector<Scored> score_inputs(const ProviderHandle& provider, const dna_score_options& options,
                                 const ScoreFlags& s, bool require_labels) {
  std::vector<Scored> out;
  if (!s.text.empty()) {
    Scored r;
    check(dna_score_text(provider.ptr, s.text.data(), s.text.size(), &options, &r.score));
    out.push_back(r);
    return out;
  }
  CorpusHandle corpus;
  check(dna_corpus_load(s.file.c_str(), require_labels ? 1 : 0, &corpus.ptr));
  const std::size_t n = dna_corpus_size(corpus.ptr);
  for (std::size_t i = 0; i < n; ++i) {
    Scored r;
    r.id = dna_corpus_id(corpus.ptr, i);
    r.label = dna_corpus_label(corpus.ptr, i);
    check(dna_score_sample(provider.ptr, corpus.ptr, i, &options, &r.score));
    out.push_back(r);
  }
  return out;
}

std::optional<double> resolve_threshold(const ThresholdFlags& t) {
  std::optional<double> from_file;
  if (!t.calibration.empty()) {
    dna_calibration cal;
    check(dna_calibration_from_json(read_file(t.calibration).c_str(), &cal));
    from_file = cal.threshold;
  }
  if (t.threshold && from_file && *t.threshold != *from_file) {
    std::cerr << "warning: --threshold " << *t.threshold << " overrides calibration threshold " << *from_file
              << " from " << t.calibration << "\n";
  }
  return t.threshold ? t.threshold : from_file;
}

// ---- commands ----

struct Flags {
  std::string config;
  ProviderFlags provider;
  ScoreFlags score;
  ThresholdFlags threshold;
  AttackFlags attack;
  std::string objective = "max-f1";
  std::string out;
  std::string out_dir = ".";
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> inputs;
  unsigned order = 3;
  double alpha = 0.1;
  std::size_t min_tokens = 0;
};

int run_score(const Flags& f) {
  require_one_input(f.score);
  auto provider = make_provider(f.provider);
  const dna_score_options options = score_options(f.provider, f.score);
  for (const Scored& r : score_inputs(*provider, options, f.score, false)) {
    ordered_json j;
    if (r.id) j["id"] = *r.id;
    j.update(score_json(r.score));
    std::cout << json_line(j);
  }
  return kExitOk;
}

int run_detect(const Flags& f) {
  require_one_input(f.score);
  const std::optional<double> tau = resolve_threshold(f.threshold);
  if (!tau) die(kExitData, "no threshold; pass --threshold or --calibration");
  auto provider = make_provider(f.provider);
  const dna_score_options options = score_options(f.provider, f.score);
  std::size_t human = 0;
  std::size_t ai = 0;
  for (const Scored& r : score_inputs(*provider, options, f.score, false)) {
    dna_verdict verdict;
    check(dna_classify(r.score.repair_score, *tau, &verdict));
    (verdict == DNA_VERDICT_HUMAN_WRITTEN ? human : ai)++;
    ordered_json j;
    if (r.id) j["id"] = *r.id;
    j["verdict"] = dna_verdict_name(verdict);
    j["repair_score"] = r.score.repair_score;
    j["threshold"] = *tau;
    j["sigma_s"] = r.score.sigma_s;
    j["sigma_ideal"] = r.score.sigma_ideal;
    j["T"] = r.score.mutated_count;
    j["L"] = r.score.scored_length;
    std::cout << json_line(j);
  }
  ordered_json summary;
  summary["summary"] = {{"n", human + ai}, {"human_written", human}, {"ai_generated", ai}, {"threshold", *tau}};
  std::cout << json_line(summary);
  return kExitOk;
}

int run_calibrate(const Flags& f) {
  if (f.score.file.empty()) die(kExitData, "--file is required");
  dna_objective objective = DNA_OBJECTIVE_MAX_F1;
  double target = 0.0;
  const std::string prefix = "target-fpr=";
  if (f.objective.rfind(prefix, 0) == 0) {
    objective = DNA_OBJECTIVE_TARGET_FPR;
    try {
      std::size_t used = 0;
      const std::string rest = f.objective.substr(prefix.size());
      target = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(rest);
    } catch (const std::exception&) {
      die(kExitData, "bad --objective '" + f.objective + "'");
    }
  } else if (f.objective != "max-f1") {
    die(kExitData, "--objective must be max-f1 or target-fpr=<q>");
  }
  auto provider = make_provider(f.provider);
  const dna_score_options options = score_options(f.provider, f.score);
  std::vector<double> scores;
  std::vector<int> labels;
  for (const Scored& r : score_inputs(*provider, options, f.score, true)) {
    scores.push_back(r.score.repair_score);
    labels.push_back(r.label);
  }
  dna_calibration cal;
  check(dna_calibrate(scores.data(), labels.data(), scores.size(), objective, target, &cal));
  CString json;
  check(dna_calibration_to_json(&cal, &json.ptr));
  emit(f.out, json.str());
  std::cerr << "threshold " << cal.threshold << " over " << cal.n_samples << " samples\n";
  return kExitOk;
}

int run_eval(const Flags& f, const CLI::App* cmd) {
  if (f.score.file.empty()) die(kExitData, "--file is required");
  dna_eval_options options;
  dna_eval_options_init(&options);
  check(dna_xppl_mode_parse(f.provider.xppl_mode.c_str(), &options.xppl_mode));
  check(dna_strategy_parse(f.score.strategy.c_str(), &options.strategy));
  options.truncation = f.score.truncate;
  options.permutations = f.score.permutations;
  options.workers = f.workers;
  if (f.score.seed) {
    options.has_seed = 1;
    options.seed = *f.score.seed;
  }
  if (options.strategy == DNA_STRATEGY_RANDOM && !options.has_seed) {
    die(kExitData, "--strategy random requires --seed");
  }
  if (!f.attack.kind.empty()) {
    options.has_attack = 1;
    check(dna_attack_kind_parse(f.attack.kind.c_str(), &options.attack_kind));
    options.attack_rate = f.attack.rate;
    options.attack_seed = f.attack.seed;
  }
  if (const auto tau = resolve_threshold(f.threshold)) {
    options.has_fixed_threshold = 1;
    options.fixed_threshold = *tau;
  }

  CorpusHandle corpus;
  check(dna_corpus_load(f.score.file.c_str(), 1, &corpus.ptr));
  auto provider = make_provider(f.provider);
  Handle<dna_report, dna_report_free> report;
  check(dna_evaluate(corpus.ptr, provider->ptr, &options, &report.ptr));

  const std::string cli = resolved_config(cmd).dump();
  CString json;
  CString csv;
  check(dna_report_json(report.ptr, cli.c_str(), &json.ptr));
  check(dna_report_csv(report.ptr, &csv.ptr));
  const std::string dir = f.out_dir.empty() ? "." : f.out_dir;
  write_file(dir + "/report.json", json.str());
  write_file(dir + "/report.csv", csv.str());

  dna_metrics m;
  check(dna_report_metrics(report.ptr, &m));
  std::cerr << "n=" << m.n_samples << " auroc=" << m.auroc << " f1_max=" << m.f1_max
            << " threshold=" << m.f1_max_threshold;
  if (m.has_f1_fixed) std::cerr << " f1_fixed=" << m.f1_fixed;
  std::cerr << "\n";
  return kExitOk;
}

int run_trajectory(const Flags& f) {
  require_one_input(f.score);
  std::string text = f.score.text;
  if (!f.score.file.empty()) text = read_file(f.score.file);
  dna_score_options options = score_options(f.provider, f.score);
  if (options.strategy == DNA_STRATEGY_CLOSED_FORM) {
    die(kExitData, "trajectory needs --strategy low-to-high, high-to-low, sequential or random");
  }
  auto provider = make_provider(f.provider);
  Handle<dna_trajectory, dna_trajectory_free> trajectory;
  check(dna_trajectory_text(provider->ptr, text.data(), text.size(), &options, &trajectory.ptr));
  CString csv;
  check(dna_trajectory_csv(trajectory.ptr, &csv.ptr));
  emit(f.out, csv.str());
  return kExitOk;
}

int run_attack(const Flags& f) {
  if (f.score.file.empty()) die(kExitData, "--file is required");
  if (f.attack.kind.empty()) die(kExitData, "--attack is required");
  dna_attack_kind kind;
  check(dna_attack_kind_parse(f.attack.kind.c_str(), &kind));
  CorpusHandle corpus;
  check(dna_corpus_load(f.score.file.c_str(), 0, &corpus.ptr));
  CString jsonl;
  check(dna_attack_corpus_jsonl(corpus.ptr, kind, f.attack.rate, f.attack.seed, &jsonl.ptr));
  emit(f.out, jsonl.str());
  return kExitOk;
}

int run_train(const Flags& f) {
  if (f.inputs.empty()) die(kExitData, "no training files given");
  if (f.out.empty()) die(kExitData, "--out is required");
  std::vector<std::string> docs;
  for (const std::string& path : f.inputs) docs.push_back(read_file(path));
  std::vector<const char*> ptrs;
  std::vector<std::size_t> lengths;
  std::size_t total = 0;
  for (const std::string& d : docs) {
    ptrs.push_back(d.data());
    lengths.push_back(d.size());
    total += d.size();
  }
  dna_ngram_options options;
  dna_ngram_options_init(&options);
  options.order = f.order;
  options.alpha = f.alpha;
  options.min_tokens = f.min_tokens;
  NgramHandle model;
  check(dna_ngram_train(ptrs.data(), lengths.data(), ptrs.size(), &options, &model.ptr));
  check(dna_ngram_save(model.ptr, f.out.c_str()));
  dna_ngram_info info;
  check(dna_ngram_info_get(model.ptr, &info));
  char fingerprint[17];
  std::snprintf(fingerprint, sizeof(fingerprint), "%016llx", static_cast<unsigned long long>(info.fingerprint));
  ordered_json j;
  j["model"] = f.out;
  j["order"] = info.order;
  j["alpha"] = info.alpha;
  j["vocab_size"] = info.vocab_size;
  j["contexts"] = info.context_count;
  j["training_tokens"] = total;
  j["fingerprint"] = fingerprint;
  std::cout << json_line(j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot detector for machine-generated text based on mutation repair", "dna-detect"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dna_version()));
  app.option_defaults()->always_capture_default();

  Flags f;
  std::map<std::string, CLI::App*> cmds;
  const auto add_cmd = [&](const std::string& name, const std::string& description) {
    CLI::App* cmd = app.add_subcommand(name, description);
    cmd->add_option("--config", f.config, "JSON file of flag values (flags > environment > file)");
    cmds[name] = cmd;
    return cmd;
  };

  CLI::App* score = add_cmd("score", "Print repair-score components as one JSON line per input");
  add_input_flags(score, f.score, true);
  add_scoring_flags(score, f.score);
  add_provider_flags(score, f.provider);

  CLI::App* detect = add_cmd("detect", "Classify inputs as human_written or ai_generated");
  add_input_flags(detect, f.score, true);
  add_threshold_flags(detect, f.threshold);
  add_scoring_flags(detect, f.score);
  add_provider_flags(detect, f.provider);

  CLI::App* calibrate = add_cmd("calibrate", "Choose a threshold on a labeled JSONL file");
  add_input_flags(calibrate, f.score, false);
  calibrate->add_option("--objective", f.objective, "max-f1 or target-fpr=<q>");
  calibrate->add_option("--out", f.out, "Calibration JSON destination (default stdout)");
  add_scoring_flags(calibrate, f.score);
  add_provider_flags(calibrate, f.provider);

  CLI::App* eval = add_cmd("eval", "Score a labeled JSONL file and write report.json and report.csv");
  add_input_flags(eval, f.score, false);
  eval->add_option("--out-dir", f.out_dir, "Directory for report.json and report.csv");
  eval->add_option("--workers", f.workers, "Samples scored concurrently (default: available cores)")
      ->check(CLI::PositiveNumber);
  add_threshold_flags(eval, f.threshold);
  add_attack_flags(eval, f.attack, "Edit attack applied to ai-labeled samples");
  add_scoring_flags(eval, f.score);
  add_provider_flags(eval, f.provider);

  CLI::App* trajectory = add_cmd("trajectory", "Write the repair trajectory of one text as t,sigma CSV");
  trajectory->add_option("--text", f.score.text, "Text to analyze");
  trajectory->add_option("--file", f.score.file, "Raw text file to analyze");
  trajectory->add_option("--out", f.out, "CSV destination (default stdout)");
  add_scoring_flags(trajectory, f.score);
  add_provider_flags(trajectory, f.provider);

  CLI::App* attack = add_cmd("attack", "Apply an edit attack to ai-labeled samples and write JSONL");
  add_input_flags(attack, f.score, false);
  add_attack_flags(attack, f.attack, "Edit kind");
  attack->add_option("--out", f.out, "JSONL destination (default stdout)");

  CLI::App* train = add_cmd("train-ngram", "Train a byte-level n-gram model on text files");
  train->add_option("inputs", f.inputs, "Training text files");
  train->add_option("--order", f.order, "Context length")->check(CLI::Range(1, 6));
  train->add_option("--alpha", f.alpha, "Add-alpha smoothing constant");
  train->add_option("--min-tokens", f.min_tokens, "Minimum training tokens (0 = 10 x vocabulary)");
  train->add_option("--out", f.out, "Model destination (.dnag)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitData;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    resolve_sources(app, active, f.config);
    const std::string name = active->get_name();
    if (name == "score") return run_score(f);
    if (name == "detect") return run_detect(f);
    if (name == "calibrate") return run_calibrate(f);
    if (name == "eval") return run_eval(f, active);
    if (name == "trajectory") return run_trajectory(f);
    if (name == "attack") return run_attack(f);
    return run_train(f);
  } catch (const CliFailure& e) {
    std::cerr << "dna-detect: " << e.message << "\n";
    return e.exit_code;
  } catch (const CLI::ParseError& e) {
    std::cerr << "dna-detect: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "dna-detect: " << e.what() << "\n";
    return kExitInternal;
  }
}
