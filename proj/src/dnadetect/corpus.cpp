#include "dnadetect/corpus.hpp"

#include <fstream>

#include <json.hpp>

namespace dna {

namespace {

using nlohmann::json;

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos; }

Sample parse_line(const std::string& raw, std::size_t line, bool require_labels) {
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, at_line(line) + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kParseError, at_line(line) + "expected a JSON object");

  Sample s;
  if (!doc.contains("text")) fail(ErrorCode::kMissingField, at_line(line) + "missing field 'text'");
  if (!doc["text"].is_string()) fail(ErrorCode::kParseError, at_line(line) + "'text' must be a string");
  s.text = doc["text"].get<std::string>();

  if (doc.contains("tokens") && !doc["tokens"].is_null()) {
    try {
      s.tokens = doc["tokens"].get<std::vector<TokenId>>();
    } catch (const json::exception&) {
      fail(ErrorCode::kParseError, at_line(line) + "'tokens' must be an array of token ids");
    }
    if (s.tokens->empty()) fail(ErrorCode::kParseError, at_line(line) + "'tokens' is empty");
  } else if (blank(s.text)) {
    fail(ErrorCode::kParseError, at_line(line) + "'text' is empty");
  }

  if (doc.contains("label") && !doc["label"].is_null()) {
    if (!doc["label"].is_string()) fail(ErrorCode::kParseError, at_line(line) + "'label' must be a string");
    const auto name = doc["label"].get<std::string>();
    s.label = parse_label(name);
    if (!s.label) {
      fail(ErrorCode::kParseError, at_line(line) + "label '" + name + "' is not 'human' or 'ai'");
    }
  } else if (require_labels) {
    fail(ErrorCode::kMissingField, at_line(line) + "missing field 'label'");
  }

  if (doc.contains("id") && !doc["id"].is_null()) {
    const json& id = doc["id"];
    if (id.is_string()) s.id = id.get<std::string>();
    else if (id.is_number_integer()) s.id = id.dump();
    else fail(ErrorCode::kParseError, at_line(line) + "'id' must be a string or integer");
  } else {
    s.id = std::to_string(line);
  }
  for (const char* key : {"source_model", "domain"}) {
    if (!doc.contains(key) || doc[key].is_null()) continue;
    if (!doc[key].is_string()) {
      fail(ErrorCode::kParseError, at_line(line) + "'" + key + "' must be a string");
    }
    (std::string_view(key) == "domain" ? s.domain : s.source_model) = doc[key].get<std::string>();
  }
  return s;
}

}  // namespace

LabeledCorpus parse_jsonl(std::istream& in, bool require_labels) {
  LabeledCorpus corpus;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (blank(raw)) continue;
    corpus.samples.push_back(parse_line(raw, line, require_labels));
  }
  return corpus;
}

LabeledCorpus load_jsonl(const std::filesystem::path& path, bool require_labels) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_jsonl(in, require_labels);
}

std::string to_jsonl_line(const Sample& sample, std::string_view extra_json) {
  nlohmann::ordered_json j;
  j["id"] = sample.id;
  j["text"] = sample.text;
  if (sample.label) j["label"] = to_string(*sample.label);
  if (sample.source_model) j["source_model"] = *sample.source_model;
  if (sample.domain) j["domain"] = *sample.domain;
  if (sample.tokens) j["tokens"] = *sample.tokens;
  if (!extra_json.empty()) {
    const auto extra = nlohmann::ordered_json::parse(extra_json);
    for (const auto& [key, value] : extra.items()) j[key] = value;
  }
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

}  // namespace dna
