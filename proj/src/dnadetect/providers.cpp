#include "dnadetect/providers.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "dnadetect/numeric.hpp"
#include "dnadetect/tokenizer.hpp"

namespace dna {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string describe(const NgramModel& m) {
  char alpha[32];
  std::snprintf(alpha, sizeof(alpha), "%g", m.alpha());
  return "ngram:order=" + std::to_string(m.order()) + ",alpha=" + alpha + ",fnv=" + hex64(m.fingerprint());
}

void check_distribution(std::span<const double> dist, std::size_t vocab, const char* what) {
  if (dist.size() != vocab) {
    fail(ErrorCode::kInvalidArgument, std::string(what) + " distribution has " +
                                          std::to_string(dist.size()) + " entries, expected " +
                                          std::to_string(vocab));
  }
  CompensatedSum total;
  for (double p : dist) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      fail(ErrorCode::kInvalidArgument, std::string(what) + " distribution has invalid entry");
    }
    total.add(p);
  }
  if (std::fabs(total.value() - 1.0) > 1e-9) {
    fail(ErrorCode::kInvalidArgument, std::string(what) + " distribution does not sum to 1");
  }
}

}  // namespace

AnalyzedText Provider::analyze_text(std::string_view text, std::size_t cap, bool full_xent) const {
  TokenSequence tokens = tokenize(text);
  const std::size_t keep = std::min({cap, pair().max_tokens, tokens.size()});
  if (keep < tokens.size()) {
    tokens.token_ids.resize(keep);
    tokens.text.reset();
  }
  PositionAnalysis analysis = analyze(tokens, full_xent);
  return {std::move(tokens), std::move(analysis)};
}

void Provider::check_tokens(const TokenSequence& tokens) const {
  if (tokens.empty()) fail(ErrorCode::kEmptyInput, "no tokens to analyze");
  if (tokens.size() > pair().max_tokens) {
    fail(ErrorCode::kInvalidArgument, "sequence of " + std::to_string(tokens.size()) +
                                          " tokens exceeds max_tokens " +
                                          std::to_string(pair().max_tokens));
  }
  const std::size_t vocab = pair().vocab_size;
  if (vocab == 0) return;
  for (TokenId t : tokens.token_ids) {
    if (t >= vocab) {
      fail(ErrorCode::kVocabMismatch,
           "token id " + std::to_string(t) + " >= vocab size " + std::to_string(vocab));
    }
  }
}

PositionRecord make_record(Position index, TokenId actual, std::span<const double> reference,
                           std::span<const double> observer, bool full_xent) {
  PositionRecord rec;
  rec.index = index;
  rec.actual_token = actual;
  if (reference[actual] <= 0.0 || observer[actual] <= 0.0) {
    fail(ErrorCode::kInvalidArgument,
         "position " + std::to_string(index) + ": actual token has zero probability");
  }
  rec.actual_logprob_ref = std::log(reference[actual]);
  rec.actual_logprob_obs = std::log(observer[actual]);

  TokenId best = 0;
  for (std::size_t v = 1; v < reference.size(); ++v) {
    if (reference[v] > reference[best]) best = static_cast<TokenId>(v);
  }
  rec.argmax_token = best;
  rec.argmax_logprob_ref = std::log(reference[best]);

  if (full_xent) {
    CompensatedSum xent;
    for (std::size_t v = 0; v < reference.size(); ++v) {
      if (reference[v] == 0.0) continue;
      if (observer[v] == 0.0) {
        fail(ErrorCode::kInvalidArgument, "observer assigns zero probability where reference does not");
      }
      xent.add(-reference[v] * std::log(observer[v]));
    }
    rec.cross_entropy_full = std::max(0.0, xent.value());
  }
  return rec;
}

NgramProvider::NgramProvider(std::shared_ptr<const NgramModel> reference,
                             std::shared_ptr<const NgramModel> observer, std::size_t max_tokens)
    : reference_(std::move(reference)), observer_(std::move(observer)) {
  if (!reference_ || !observer_) fail(ErrorCode::kInvalidArgument, "n-gram provider needs two models");
  if (reference_->vocab_size() != observer_->vocab_size()) {
    fail(ErrorCode::kVocabMismatch, "reference and observer vocabularies differ");
  }
  if (reference_->vocab_size() != ByteTokenizer::kVocabSize) {
    fail(ErrorCode::kVocabMismatch, "n-gram provider requires byte-level models (vocab 256)");
  }
  if (max_tokens < 1) fail(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  pair_.reference_id = describe(*reference_);
  pair_.observer_id = describe(*observer_);
  pair_.vocab_size = reference_->vocab_size();
  pair_.supports_full_cross_entropy = true;
  pair_.max_tokens = max_tokens;
}

TokenSequence NgramProvider::tokenize(std::string_view text) const {
  return ByteTokenizer::tokenize(text);
}

PositionAnalysis NgramProvider::analyze(const TokenSequence& tokens, bool full_xent) const {
  check_tokens(tokens);
  std::span<const TokenId> ids(tokens.token_ids);
  std::vector<PositionRecord> records;
  records.reserve(ids.size());
  std::vector<double> ref_dist;
  std::vector<double> obs_dist;
  if (full_xent) {
    ref_dist.resize(pair_.vocab_size);
    obs_dist.resize(pair_.vocab_size);
  }

  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto history = ids.first(k);
    if (full_xent) {
      reference_->distribution(history, ref_dist);
      observer_->distribution(history, obs_dist);
      PositionRecord rec = make_record(static_cast<Position>(k + 1), ids[k], ref_dist, obs_dist, true);
      // Use the closed-form log-probabilities so both paths agree bit-for-bit.
      rec.actual_logprob_ref = reference_->logprob(history, ids[k]);
      rec.actual_logprob_obs = observer_->logprob(history, ids[k]);
      const auto [best, best_lp] = reference_->argmax(history);
      rec.argmax_token = best;
      rec.argmax_logprob_ref = best_lp;
      records.push_back(rec);
      continue;
    }
    PositionRecord rec;
    rec.index = static_cast<Position>(k + 1);
    rec.actual_token = ids[k];
    rec.actual_logprob_ref = reference_->logprob(history, ids[k]);
    rec.actual_logprob_obs = observer_->logprob(history, ids[k]);
    const auto [best, best_lp] = reference_->argmax(history);
    rec.argmax_token = best;
    rec.argmax_logprob_ref = best_lp;
    records.push_back(rec);
  }
  return PositionAnalysis(std::move(records));
}

TableProvider::TableProvider(std::size_t vocab_size, std::map<std::vector<TokenId>, Entry> table,
                             std::optional<Entry> fallback, std::size_t max_tokens)
    : table_(std::move(table)), fallback_(std::move(fallback)) {
  if (vocab_size < 2) fail(ErrorCode::kInvalidArgument, "vocabulary needs at least 2 tokens");
  if (max_tokens < 1) fail(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  for (const auto& [prefix, entry] : table_) {
    check_distribution(entry.reference, vocab_size, "reference");
    check_distribution(entry.observer, vocab_size, "observer");
    for (TokenId t : prefix) {
      if (t >= vocab_size) fail(ErrorCode::kVocabMismatch, "table prefix token outside vocabulary");
    }
  }
  if (fallback_) {
    check_distribution(fallback_->reference, vocab_size, "reference");
    check_distribution(fallback_->observer, vocab_size, "observer");
  }
  pair_.reference_id = "table:reference";
  pair_.observer_id = "table:observer";
  pair_.vocab_size = vocab_size;
  pair_.supports_full_cross_entropy = true;
  pair_.max_tokens = max_tokens;
}

TableProvider TableProvider::from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("table provider JSON: ") + e.what());
  }
  try {
    const auto vocab = doc.at("vocab_size").get<std::size_t>();
    const auto max_tokens = doc.value("max_tokens", kDefaultMaxTokens);
    std::map<std::vector<TokenId>, Entry> table;
    for (const auto& e : doc.at("entries")) {
      table[e.at("prefix").get<std::vector<TokenId>>()] =
          Entry{e.at("ref").get<std::vector<double>>(), e.at("obs").get<std::vector<double>>()};
    }
    std::optional<Entry> fallback;
    if (doc.contains("fallback") && !doc["fallback"].is_null()) {
      fallback = Entry{doc["fallback"].at("ref").get<std::vector<double>>(),
                       doc["fallback"].at("obs").get<std::vector<double>>()};
    }
    return TableProvider(vocab, std::move(table), std::move(fallback), max_tokens);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("table provider JSON: ") + e.what());
  }
}

TokenSequence TableProvider::tokenize(std::string_view text) const {
  return ByteTokenizer::tokenize(text);
}

const TableProvider::Entry& TableProvider::entry_for(std::span<const TokenId> prefix) const {
  auto it = table_.find(std::vector<TokenId>(prefix.begin(), prefix.end()));
  if (it != table_.end()) return it->second;
  if (fallback_) return *fallback_;
  fail(ErrorCode::kInvalidArgument,
       "table provider has no entry for a prefix of length " + std::to_string(prefix.size()));
}

PositionAnalysis TableProvider::analyze(const TokenSequence& tokens, bool full_xent) const {
  check_tokens(tokens);
  std::span<const TokenId> ids(tokens.token_ids);
  std::vector<PositionRecord> records;
  records.reserve(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Entry& e = entry_for(ids.first(k));
    records.push_back(make_record(static_cast<Position>(k + 1), ids[k], e.reference, e.observer, full_xent));
  }
  return PositionAnalysis(std::move(records));
}

PositionAnalysis CountingProvider::analyze(const TokenSequence& tokens, bool full_xent) const {
  calls_.fetch_add(1);
  return inner_->analyze(tokens, full_xent);
}

AnalyzedText CountingProvider::analyze_text(std::string_view text, std::size_t cap,
                                            bool full_xent) const {
  calls_.fetch_add(1);
  return inner_->analyze_text(text, cap, full_xent);
}

}  // namespace dna
