// Copyright 2026 The lexirec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXIREC_SELECTION_HPP
#define LEXIREC_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lexirec/model.hpp"
#include "lexirec/rng.hpp"

namespace lexirec {

enum class Strategy {
    kRank,      // "r"    aggregate score, descending
    kLexicase,  // "l"    epsilon lexicase over preference features
    kMix50,     // "m-50" 1:1 interleave of the two, ranking first
    kRandom,    // "random"
};

std::string_view strategy_name(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view name);

// One user's selection problem: candidate items and, row-aligned with them,
// the per-dimension preference features of each item for that user.
struct CandidateSet {
    int user = 0;
    std::vector<int> items;
    std::vector<double> features;  // |items| x dim, row-major
    int dim = 0;

    std::size_t size() const { return items.size(); }
    const double* row(std::size_t j) const { return features.data() + j * dim; }
};

CandidateSet build_candidate_set(const GmfModel& model, int user, std::span<const int> pool);

struct LexicaseConfig {
    enum class EpsilonMode {
        kMad,       // median absolute deviation of the feature over survivors
        kAbsolute,  // fixed epsilon_value
    };

    int max_features = 10;  // how many shuffled features one selection may visit
    EpsilonMode epsilon_mode = EpsilonMode::kMad;
    double epsilon_value = 0.0;
    std::uint64_t seed = 0;
};

struct RecommendationList {
    int user = 0;
    std::vector<int> items;  // distinct item indices, selection order
    Strategy strategy = Strategy::kRank;
    int k = 0;
};

// Top-k by aggregate score (feature row sum), ties broken by ascending item
// index.
RecommendationList rank_topk(const CandidateSet& candidates, int k);

// One epsilon-lexicase selection event: filter the candidates feature by
// feature in the given order, keeping only those within epsilon of the best,
// and return the survivor (rng breaks a multi-way tie at the end).
// Returns the selected item index.
int lexicase_select_with_order(const CandidateSet& candidates,
                               std::span<const int> feature_order,
                               const LexicaseConfig& config, Rng& rng);

// Same, but the feature order is a fresh shuffle of all dimensions, visited
// up to config.max_features deep.
int lexicase_select_one(const CandidateSet& candidates, const LexicaseConfig& config, Rng& rng);

// Repeats lexicase selection without replacement until min(k, |candidates|)
// items are chosen. The whole list is deterministic given config.seed.
RecommendationList lexicase_topk(const CandidateSet& candidates, int k,
                                 const LexicaseConfig& config);

// Alternates ranking and lexicase picks (ranking first), skipping items
// already taken. May return fewer than k items when both sources run dry.
RecommendationList mix_interleave(const RecommendationList& ranked,
                                  const RecommendationList& lexed, int k);

// min(k, |pool|) items sampled uniformly without replacement.
RecommendationList random_topk(std::span<const int> pool, int user, int k, std::uint64_t seed);

}  // namespace lexirec

#endif  // LEXIREC_SELECTION_HPP
