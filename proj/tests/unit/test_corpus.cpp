#include <doctest.h>

#include <sstream>

#include "dnadetect/corpus.hpp"

using namespace dna;

namespace {

LabeledCorpus parse(const std::string& s, bool require_labels = true) {
  std::istringstream in(s);
  return parse_jsonl(in, require_labels);
}

ErrorCode code_of(const std::string& s, bool require_labels = true) {
  try {
    parse(s, require_labels);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("JSONL parsing") {
  const LabeledCorpus c = parse(
      "{\"id\": \"a\", \"text\": \"hello\", \"label\": \"human\", \"domain\": \"news\"}\n"
      "\n"
      "{\"text\": \"bye\", \"label\": \"AI\", \"source_model\": \"gpt\"}\n"
      "{\"id\": 7, \"text\": \"\", \"label\": \"ai\", \"tokens\": [1, 2, 3]}\n");
  REQUIRE(c.samples.size() == 3);
  CHECK(c.samples[0].id == "a");
  CHECK(c.samples[0].domain == "news");
  CHECK(c.samples[1].id == "3");  // defaults to the line number
  CHECK(c.samples[1].label == Label::kAi);
  CHECK(c.samples[1].source_model == "gpt");
  CHECK(c.samples[2].id == "7");
  CHECK(c.samples[2].tokens == std::vector<TokenId>{1, 2, 3});
  CHECK(c.count(Label::kAi) == 2);
}

TEST_CASE("JSONL errors name the line") {
  try {
    parse("{\"text\": \"ok\", \"label\": \"human\"}\n{broken\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).rfind("line 2: ", 0) == 0);
  }
  CHECK(code_of("{\"label\": \"human\"}") == ErrorCode::kMissingField);
  CHECK(code_of("{\"text\": \"x\"}") == ErrorCode::kMissingField);
  CHECK(code_of("{\"text\": \"x\", \"label\": \"robot\"}") == ErrorCode::kParseError);
  CHECK(code_of("{\"text\": \"  \", \"label\": \"ai\"}") == ErrorCode::kParseError);
  CHECK(code_of("[1, 2]") == ErrorCode::kParseError);
  CHECK(parse("{\"text\": \"x\"}", false).samples.size() == 1);
}

TEST_CASE("JSONL lines round-trip") {
  const LabeledCorpus c =
      parse("{\"id\": \"q\", \"text\": \"tab\\there\", \"label\": \"ai\", \"tokens\": [9, 104]}\n");
  const std::string line = to_jsonl_line(c.samples[0], R"({"attack": null})");
  const LabeledCorpus back = parse(line + "\n");
  CHECK(back.samples[0].text == "tab\there");
  CHECK(back.samples[0].tokens == c.samples[0].tokens);
  CHECK(line.find("\"attack\":null") != std::string::npos);
}
