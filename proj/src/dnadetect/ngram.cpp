#include "dnadetect/ngram.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "dnadetect/numeric.hpp"

namespace dna {

namespace {

constexpr char kMagic[4] = {'D', 'N', 'A', 'G'};

class ByteWriter {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  template <typename T>
  void le(T value) {
    for (std::size_t k = 0; k < sizeof(T); ++k) {
      out_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * k)));
    }
  }
  void f64(double value) { le(std::bit_cast<std::uint64_t>(value)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail(ErrorCode::kParseError, "n-gram model file is truncated");
  }
  template <typename T>
  T le() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) {
      v |= static_cast<std::uint64_t>(in_[pos_ + k]) << (8 * k);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

unsigned bits_for(std::size_t vocab_size) {
  // Symbols range over [0, vocab_size] (BOS included).
  return static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(vocab_size)));
}

}  // namespace

NgramModel::NgramModel(unsigned order, double alpha, std::size_t vocab_size)
    : order_(order), alpha_(alpha), vocab_size_(vocab_size), symbol_bits_(bits_for(vocab_size)) {
  if (order_ < 1) fail(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    fail(ErrorCode::kInvalidArgument, "smoothing alpha must be finite and > 0");
  }
  if (vocab_size_ < 2) fail(ErrorCode::kInvalidArgument, "vocabulary needs at least 2 tokens");
  if (static_cast<std::size_t>(order_ + 1) * symbol_bits_ > 64) {
    fail(ErrorCode::kInvalidArgument,
         "order " + std::to_string(order_) + " too large for a vocabulary of " +
             std::to_string(vocab_size_));
  }
}

std::uint64_t NgramModel::context_key(std::span<const TokenId> history) const {
  std::uint64_t key = 0;
  for (unsigned k = 0; k < order_; ++k) {
    // Oldest symbol first so that key order is lexicographic context order.
    const std::size_t back = order_ - k;
    const TokenId symbol = history.size() >= back ? history[history.size() - back] : bos();
    key = (key << symbol_bits_) | symbol;
  }
  return key;
}

const NgramModel::Row* NgramModel::find(std::span<const TokenId> history) const {
  auto it = rows_.find(context_key(history));
  return it == rows_.end() ? nullptr : &it->second;
}

std::uint64_t NgramModel::context_total(std::span<const TokenId> history) const {
  const Row* row = find(history);
  return row ? row->total : 0;
}

std::uint64_t NgramModel::count(std::span<const TokenId> history, TokenId next) const {
  const Row* row = find(history);
  if (!row) return 0;
  auto it = std::lower_bound(row->counts.begin(), row->counts.end(), next,
                             [](const auto& entry, TokenId t) { return entry.first < t; });
  return (it != row->counts.end() && it->first == next) ? it->second : 0;
}

double NgramModel::probability(std::span<const TokenId> history, TokenId next) const {
  if (next >= vocab_size_) {
    fail(ErrorCode::kVocabMismatch, "token " + std::to_string(next) + " outside vocabulary");
  }
  const Row* row = find(history);
  const std::uint64_t total = row ? row->total : 0;
  return (static_cast<double>(count(history, next)) + alpha_) / denominator(total);
}

double NgramModel::logprob(std::span<const TokenId> history, TokenId next) const {
  if (next >= vocab_size_) {
    fail(ErrorCode::kVocabMismatch, "token " + std::to_string(next) + " outside vocabulary");
  }
  const Row* row = find(history);
  const std::uint64_t total = row ? row->total : 0;
  return std::log(static_cast<double>(count(history, next)) + alpha_) -
         std::log(denominator(total));
}

void NgramModel::distribution(std::span<const TokenId> history, std::span<double> out) const {
  if (out.size() != vocab_size_) {
    fail(ErrorCode::kInvalidArgument, "distribution buffer must have vocab_size entries");
  }
  const Row* row = find(history);
  const double denom = denominator(row ? row->total : 0);
  std::fill(out.begin(), out.end(), alpha_ / denom);
  if (row) {
    for (const auto& [token, c] : row->counts) {
      out[token] = (static_cast<double>(c) + alpha_) / denom;
    }
  }
}

std::pair<TokenId, double> NgramModel::argmax(std::span<const TokenId> history) const {
  const Row* row = find(history);
  if (!row) {
    // Unseen context: uniform, lowest id wins.
    return {0, std::log(alpha_) - std::log(denominator(0))};
  }
  return {row->argmax,
          std::log(static_cast<double>(row->argmax_count) + alpha_) - std::log(denominator(row->total))};
}

NgramModel NgramModel::train(std::span<const std::vector<TokenId>> documents,
                             const NgramTrainOptions& options) {
  NgramModel model(options.order, options.alpha, options.vocab_size);

  std::size_t total_tokens = 0;
  for (const auto& doc : documents) total_tokens += doc.size();
  const std::size_t min_tokens = options.min_tokens.value_or(10 * options.vocab_size);
  if (total_tokens < min_tokens) {
    fail(ErrorCode::kCorpusTooSmall, "corpus has " + std::to_string(total_tokens) +
                                         " tokens, need at least " + std::to_string(min_tokens));
  }

  // Joint key = (context key << bits) | next token.
  std::unordered_map<std::uint64_t, std::uint64_t> joint;
  joint.reserve(total_tokens / 4 + 16);
  for (const auto& doc : documents) {
    std::span<const TokenId> tokens(doc);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] >= model.vocab_size_) {
        fail(ErrorCode::kVocabMismatch,
             "training token " + std::to_string(tokens[i]) + " outside vocabulary");
      }
      const std::uint64_t ctx = model.context_key(tokens.first(i));
      ++joint[(ctx << model.symbol_bits_) | tokens[i]];
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(joint.begin(), joint.end());
  std::sort(entries.begin(), entries.end());
  const std::uint64_t token_mask = (std::uint64_t{1} << model.symbol_bits_) - 1;
  model.rows_.reserve(entries.size() / 2 + 1);
  for (const auto& [key, c] : entries) {
    Row& row = model.rows_[key >> model.symbol_bits_];
    const auto token = static_cast<TokenId>(key & token_mask);
    row.counts.emplace_back(token, c);
    row.total += c;
    if (c > row.argmax_count) {  // ascending token order keeps the lowest id on ties
      row.argmax_count = c;
      row.argmax = token;
    }
  }
  return model;
}

NgramModel train_ngram(std::span<const std::vector<TokenId>> documents,
                       const NgramTrainOptions& options) {
  return NgramModel::train(documents, options);
}

std::vector<std::uint8_t> NgramModel::serialize() const {
  std::vector<std::uint64_t> keys;
  keys.reserve(rows_.size());
  for (const auto& entry : rows_) keys.push_back(entry.first);
  std::sort(keys.begin(), keys.end());

  ByteWriter w;
  w.bytes(kMagic, sizeof(kMagic));
  w.le<std::uint16_t>(kFormatVersion);
  w.le<std::uint16_t>(static_cast<std::uint16_t>(order_));
  w.f64(alpha_);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(vocab_size_));
  w.le<std::uint64_t>(keys.size());
  const std::uint64_t mask = (std::uint64_t{1} << symbol_bits_) - 1;
  for (std::uint64_t key : keys) {
    for (unsigned k = 0; k < order_; ++k) {
      w.le<std::uint32_t>(static_cast<std::uint32_t>((key >> (symbol_bits_ * (order_ - 1 - k))) & mask));
    }
    const Row& row = rows_.at(key);
    w.le<std::uint32_t>(static_cast<std::uint32_t>(row.counts.size()));
    for (const auto& [token, c] : row.counts) {
      w.le<std::uint32_t>(token);
      w.le<std::uint64_t>(c);
    }
  }
  return w.take();
}

NgramModel NgramModel::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto magic = r.take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    fail(ErrorCode::kParseError, "not an n-gram model file (bad magic)");
  }
  const auto version = r.le<std::uint16_t>();
  if (version != kFormatVersion) {
    fail(ErrorCode::kParseError, "unsupported n-gram model version " + std::to_string(version));
  }
  const auto order = r.le<std::uint16_t>();
  const double alpha = r.f64();
  const auto vocab = r.le<std::uint32_t>();
  NgramModel model(order, alpha, vocab);

  const auto n_contexts = r.le<std::uint64_t>();
  std::uint64_t previous = 0;
  for (std::uint64_t n = 0; n < n_contexts; ++n) {
    std::uint64_t key = 0;
    for (unsigned k = 0; k < order; ++k) {
      const auto symbol = r.le<std::uint32_t>();
      if (symbol > vocab) fail(ErrorCode::kParseError, "context symbol outside vocabulary");
      key = (key << model.symbol_bits_) | symbol;
    }
    if (n > 0 && key <= previous) fail(ErrorCode::kParseError, "contexts not strictly sorted");
    previous = key;

    Row row;
    const auto n_entries = r.le<std::uint32_t>();
    if (n_entries == 0) fail(ErrorCode::kParseError, "empty context row");
    for (std::uint32_t e = 0; e < n_entries; ++e) {
      const auto token = r.le<std::uint32_t>();
      const auto c = r.le<std::uint64_t>();
      if (token >= vocab) fail(ErrorCode::kParseError, "token outside vocabulary");
      if (c == 0) fail(ErrorCode::kParseError, "zero count entry");
      if (!row.counts.empty() && token <= row.counts.back().first) {
        fail(ErrorCode::kParseError, "row entries not strictly sorted");
      }
      row.counts.emplace_back(token, c);
      row.total += c;
      if (c > row.argmax_count) {
        row.argmax_count = c;
        row.argmax = token;
      }
    }
    model.rows_.emplace(key, std::move(row));
  }
  if (!r.done()) fail(ErrorCode::kParseError, "trailing bytes after n-gram model");
  return model;
}

NgramModel NgramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open n-gram model " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

void NgramModel::save(const std::filesystem::path& path) const {
  const auto bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write n-gram model " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::uint64_t NgramModel::fingerprint() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : serialize()) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool NgramModel::operator==(const NgramModel& other) const {
  return order_ == other.order_ && alpha_ == other.alpha_ && vocab_size_ == other.vocab_size_ &&
         rows_ == other.rows_;
}

TokenSequence sample(const NgramModel& model, std::size_t length, double temperature,
                     std::uint64_t seed, std::span<const TokenId> prompt) {
  if (length < 1) fail(ErrorCode::kInvalidArgument, "sample length must be >= 1");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    fail(ErrorCode::kInvalidArgument, "temperature must be finite and >= 0");
  }
  std::vector<TokenId> history(prompt.begin(), prompt.end());
  history.reserve(prompt.size() + length);
  Rng rng(seed);
  std::vector<double> probs(model.vocab_size());

  for (std::size_t n = 0; n < length; ++n) {
    if (temperature == 0.0) {
      history.push_back(model.argmax(history).first);
      continue;
    }
    model.distribution(history, probs);
    double max_logit = -INFINITY;
    for (double& p : probs) {
      p = std::log(p) / temperature;
      max_logit = std::max(max_logit, p);
    }
    CompensatedSum norm;
    for (double& p : probs) {
      p = std::exp(p - max_logit);
      norm.add(p);
    }
    const double target = rng.unit() * norm.value();
    double cumulative = 0.0;
    TokenId chosen = static_cast<TokenId>(probs.size() - 1);
    for (std::size_t v = 0; v < probs.size(); ++v) {
      cumulative += probs[v];
      if (target < cumulative) {
        chosen = static_cast<TokenId>(v);
        break;
      }
    }
    history.push_back(chosen);
  }

  TokenSequence out;
  out.token_ids.assign(history.begin() + static_cast<std::ptrdiff_t>(prompt.size()), history.end());
  return out;
}

}  // namespace dna
