#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dnadetect/core.hpp"
#include "dnadetect/ngram.hpp"
#include "dnadetect/providers.hpp"

namespace dna::testing {

/// Synthetic detection experiment over the bundled public-domain corpus.
/// Each text file is split at 85%: the head trains an order-3 reference and
/// an order-2 observer byte model, the tail yields human excerpts. AI samples
/// are greedy continuations of 4-byte prompts taken from the training heads.
struct SyntheticSetup {
  std::shared_ptr<const NgramModel> reference;
  std::shared_ptr<const NgramModel> observer;
  std::vector<std::string> train_heads;
  std::vector<std::string> held_out_tails;
  std::size_t corpus_bytes = 0;

  std::shared_ptr<const NgramProvider> provider(std::size_t max_tokens = kDefaultMaxTokens) const;
};

inline constexpr std::size_t kExcerptTokens = 300;

/// Trains from scratch; synthetic_setup() caches one instance.
SyntheticSetup build_synthetic_setup();
const SyntheticSetup& synthetic_setup();

enum class Split { kEval, kCalibration };

/// n human excerpts followed by n AI samples, labeled; splits are disjoint.
LabeledCorpus synthetic_corpus(Split split, std::size_t n_per_class);

std::filesystem::path corpus_dir();

/// Random table-provider instance for property tests.
struct RandomInstance {
  std::shared_ptr<const TableProvider> provider;
  TokenSequence tokens;
};

/// Sequence of length in [min_len, max_len] over a vocabulary of 2..max_vocab
/// tokens, with random reference and observer distributions at every prefix.
/// Actual tokens are drawn from the reference distribution, mixing mutated
/// and argmax positions.
RandomInstance random_instance(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len,
                               std::size_t max_vocab);

}  // namespace dna::testing
