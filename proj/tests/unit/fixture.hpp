#pragma once

#include "dnadetect/providers.hpp"

namespace dna::testing {

// Two-token vocabulary {A = 0, B = 1}; s = [A, B].
//   x_<1 = []  : reference (0.75, 0.25), observer (0.7, 0.3)
//   x_<2 = [A] : reference (0.6, 0.4),   observer (0.5, 0.5)
inline constexpr const char* kFixtureTable = R"({
  "vocab_size": 2,
  "entries": [
    {"prefix": [], "ref": [0.75, 0.25], "obs": [0.7, 0.3]},
    {"prefix": [0], "ref": [0.6, 0.4], "obs": [0.5, 0.5]}
  ]})";

inline PositionAnalysis fixture_analysis(bool full_xent = false) {
  return TableProvider::from_json(kFixtureTable).analyze(TokenSequence{{0, 1}, std::nullopt}, full_xent);
}

}  // namespace dna::testing
