// Copyright 2026 The ASTE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASTE_SYNTHETIC_H_
#define ASTE_SYNTHETIC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aste/corpus.h"

namespace aste {

// Word lists for the synthetic review generator. Opinion words are grouped
// by the polarity they determine.
struct SyntheticLexicon {
  std::vector<std::pair<std::string, std::string>> aspects;  // term, category
  std::array<std::vector<std::string>, kNumPolarities> opinions;
  std::vector<std::string> intensifiers;
  std::vector<std::string> fillers;
  std::vector<std::string> closers;

  std::vector<std::string> AspectTerms() const;
  std::vector<std::string> OpinionTerms() const;
};

const SyntheticLexicon& DefaultSyntheticLexicon();

struct SyntheticOptions {
  size_t reviews = 500;
  uint64_t seed = 42;
  double two_clause_fraction = 0.4;
  double intensifier_fraction = 0.3;
  // Probability of sprinkling an emoji or doubled whitespace into a review.
  double noise_fraction = 0.3;
};

// Each review has one or two clauses "[fillers] ASPECT [intensifier] OPINION
// [closer]". The opinion span (including its intensifier) directly follows
// the aspect; the gold triplet's polarity is the opinion word's group. Every
// review carries a single annotation record equal to its gold.
Corpus GenerateSyntheticCorpus(
    const SyntheticOptions& options,
    const SyntheticLexicon& lexicon = DefaultSyntheticLexicon());

}  // namespace aste

#endif  // ASTE_SYNTHETIC_H_
