#include "dnadetect/remote.hpp"

#include <chrono>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

namespace dna {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  fail(ErrorCode::kProviderUnavailable, "malformed provider response: " + what);
}

}  // namespace

std::string encode_analyze_request(std::string_view text, bool full_xent) {
  json body = {{"text", std::string(text)}, {"include_full_xent", full_xent}};
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::pair<std::string, bool> decode_analyze_request(std::string_view body) {
  try {
    const json doc = json::parse(body);
    return {doc.at("text").get<std::string>(), doc.value("include_full_xent", false)};
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, std::string("analyze request: ") + e.what());
  }
}

std::string encode_analyze_response(const TokenSequence& tokens, const PositionAnalysis& analysis) {
  json positions = json::array();
  for (const PositionRecord& r : analysis.records()) {
    positions.push_back({{"i", r.index},
                         {"tok", r.actual_token},
                         {"lp_ref", r.actual_logprob_ref},
                         {"lp_obs", r.actual_logprob_obs},
                         {"argmax_tok", r.argmax_token},
                         {"argmax_lp_ref", r.argmax_logprob_ref},
                         {"xent", r.cross_entropy_full ? json(*r.cross_entropy_full) : json(nullptr)}});
  }
  json body = {{"tokens", tokens.token_ids}, {"positions", std::move(positions)}};
  return body.dump();
}

AnalyzedText decode_analyze_response(std::string_view body, std::optional<std::size_t> vocab_size) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  if (!doc.is_object() || !doc.contains("tokens") || !doc.contains("positions") ||
      !doc["tokens"].is_array() || !doc["positions"].is_array()) {
    malformed("expected object with 'tokens' and 'positions' arrays");
  }

  TokenSequence tokens;
  std::vector<PositionRecord> records;
  try {
    tokens.token_ids = doc["tokens"].get<std::vector<TokenId>>();
    for (const json& p : doc["positions"]) {
      PositionRecord r;
      r.index = p.at("i").get<Position>();
      r.actual_token = p.at("tok").get<TokenId>();
      r.actual_logprob_ref = p.at("lp_ref").get<double>();
      r.actual_logprob_obs = p.at("lp_obs").get<double>();
      r.argmax_token = p.at("argmax_tok").get<TokenId>();
      r.argmax_logprob_ref = p.at("argmax_lp_ref").get<double>();
      if (p.contains("xent") && !p["xent"].is_null()) r.cross_entropy_full = p["xent"].get<double>();
      if (r.actual_token == r.argmax_token) r.argmax_logprob_ref = r.actual_logprob_ref;
      records.push_back(r);
    }
  } catch (const json::exception& e) {
    malformed(e.what());
  }

  const std::size_t n_tokens = tokens.size();
  if (records.empty()) malformed("no scored positions");
  // A service that cannot condition the first token reports L - 1 positions.
  if (records.size() != n_tokens && records.size() + 1 != n_tokens) {
    malformed(std::to_string(records.size()) + " positions for " + std::to_string(n_tokens) + " tokens");
  }
  for (const PositionRecord& r : records) {
    if (r.index < 1 || r.index > n_tokens || tokens.token_ids[r.index - 1] != r.actual_token) {
      malformed("position " + std::to_string(r.index) + " does not match the token list");
    }
  }
  if (vocab_size) {
    for (TokenId t : tokens.token_ids) {
      if (t >= *vocab_size) {
        fail(ErrorCode::kVocabMismatch, "remote token id " + std::to_string(t) + " >= vocab size " +
                                            std::to_string(*vocab_size));
      }
    }
    for (const PositionRecord& r : records) {
      if (r.argmax_token >= *vocab_size) fail(ErrorCode::kVocabMismatch, "remote argmax token outside vocabulary");
    }
  }
  try {
    PositionAnalysis analysis(std::move(records));
    return {std::move(tokens), std::move(analysis)};
  } catch (const Error& e) {
    malformed(e.what());
  }
}

RemoteProvider::RemoteProvider(RemoteConfig config) : config_(std::move(config)) {
  const std::string& url = config_.url;
  const auto scheme_end = url.find("://");
  if (url.empty() || scheme_end == std::string::npos) {
    fail(ErrorCode::kInvalidArgument, "provider URL must look like http://host:port, got '" + url + "'");
  }
  if (url.compare(0, scheme_end, "http") != 0) {
    fail(ErrorCode::kInvalidArgument, "only http:// provider URLs are supported");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  std::string base = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!base.empty() && base.back() == '/') base.pop_back();
  path_ = base + "/v1/analyze";

  if (config_.max_in_flight < 1 || config_.max_in_flight > 1024) {
    fail(ErrorCode::kInvalidArgument, "max_in_flight must be in [1, 1024]");
  }
  if (config_.max_tokens < 1) fail(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  in_flight_ = std::make_unique<std::counting_semaphore<1024>>(config_.max_in_flight);

  pair_.reference_id = "remote:" + url + "#reference";
  pair_.observer_id = "remote:" + url + "#observer";
  pair_.vocab_size = config_.vocab_size.value_or(0);
  pair_.supports_full_cross_entropy = true;
  pair_.max_tokens = config_.max_tokens;
}

RemoteProvider::~RemoteProvider() = default;

TokenSequence RemoteProvider::tokenize(std::string_view) const {
  fail(ErrorCode::kModeUnsupported, "remote provider tokenizes server-side; pass text instead");
}

PositionAnalysis RemoteProvider::analyze(const TokenSequence&, bool) const {
  fail(ErrorCode::kModeUnsupported, "remote provider cannot score pre-tokenized input");
}

std::string RemoteProvider::post_with_retries(const std::string& body) const {
  in_flight_->acquire();
  struct Release {
    std::counting_semaphore<1024>* sem;
    ~Release() { sem->release(); }
  } release{in_flight_.get()};

  std::string last_error;
  const std::uint32_t attempts = config_.retries + 1;
  for (std::uint32_t attempt = 0; attempt < attempts; ++attempt) {
    httplib::Client client(origin_);
    const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    return res->body;
  }
  fail(ErrorCode::kProviderUnavailable, "POST " + origin_ + path_ + " failed after " +
                                            std::to_string(config_.retries) + " retries: " + last_error);
}

AnalyzedText RemoteProvider::analyze_text(std::string_view text, std::size_t cap, bool full_xent) const {
  if (text.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos) {
    fail(ErrorCode::kEmptyInput, "input text is empty after trimming");
  }
  AnalyzedText out = decode_analyze_response(post_with_retries(encode_analyze_request(text, full_xent)),
                                             config_.vocab_size);
  out.tokens.text = std::string(text);

  const std::size_t keep = std::min(cap, config_.max_tokens);
  auto records = out.analysis.records();
  if (records.size() > keep) {
    std::vector<PositionRecord> kept(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(keep));
    out.tokens.token_ids.resize(kept.back().index);
    out.tokens.text.reset();
    out.analysis = PositionAnalysis(std::move(kept));
  }
  return out;
}

}  // namespace dna
