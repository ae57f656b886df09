#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "dnadetect/core.hpp"

namespace dna {

/// One JSON object per line: "text" (string) and "label" ("human"/"ai", any
/// case) are required; "id" (string or number; defaults to the 1-based line
/// number), "source_model", "domain" and "tokens" (array of token ids) are
/// optional. Blank lines are skipped. Errors name the offending line:
/// kParseError for malformed JSON or values, kMissingField for absent keys.
LabeledCorpus parse_jsonl(std::istream& in, bool require_labels = true);
LabeledCorpus load_jsonl(const std::filesystem::path& path, bool require_labels = true);

/// Serializes one sample back to a JSONL line (no trailing newline).
/// `extra_json`, when non-empty, is a JSON object merged into the line.
std::string to_jsonl_line(const Sample& sample, std::string_view extra_json = {});

}  // namespace dna
