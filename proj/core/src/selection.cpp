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

#include "lexirec/selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "lexirec/error.hpp"

namespace lexirec {

std::string_view strategy_name(Strategy strategy) {
    switch (strategy) {
        case Strategy::kRank: return "r";
        case Strategy::kLexicase: return "l";
        case Strategy::kMix50: return "m-50";
        case Strategy::kRandom: return "random";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    if (name == "r") return Strategy::kRank;
    if (name == "l") return Strategy::kLexicase;
    if (name == "m-50") return Strategy::kMix50;
    if (name == "random") return Strategy::kRandom;
    return std::nullopt;
}

CandidateSet build_candidate_set(const GmfModel& model, int user, std::span<const int> pool) {
    CandidateSet set;
    set.user = user;
    set.dim = model.dim();
    set.items.assign(pool.begin(), pool.end());
    set.features.resize(pool.size() * static_cast<std::size_t>(set.dim));
    for (std::size_t j = 0; j < pool.size(); ++j) {
        const PreferenceFeatures features = model.deaggregate(user, pool[j]);
        std::copy(features.values.begin(), features.values.end(),
                  set.features.begin() + j * static_cast<std::size_t>(set.dim));
    }
    return set;
}

namespace {

// Aggregate score of row j, accumulated in feature order so it equals the
// model's scalar prediction exactly.
double row_sum(const CandidateSet& candidates, std::size_t j) {
    const double* row = candidates.row(j);
    double sum = 0.0;
    for (int f = 0; f < candidates.dim; ++f) sum += row[f];
    return sum;
}

double median_of(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Median absolute deviation of the given values.
double mad_of(std::span<const double> values) {
    std::vector<double> work(values.begin(), values.end());
    const double med = median_of(work);
    for (double& v : work) v = std::fabs(v - med);
    return median_of(work);
}

// Shared filter loop; returns the surviving row position.
std::size_t select_position(const CandidateSet& candidates, std::span<const int> feature_order,
                            const LexicaseConfig& config, Rng& rng) {
    if (candidates.size() == 0) throw Error("lexicase selection on an empty candidate set");
    std::vector<std::size_t> survivors(candidates.size());
    std::iota(survivors.begin(), survivors.end(), std::size_t{0});

    std::vector<double> column;
    std::vector<std::size_t> kept;
    for (int feature : feature_order) {
        if (feature < 0 || feature >= candidates.dim) {
            throw std::out_of_range("feature index " + std::to_string(feature) + " out of range");
        }
        column.clear();
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s : survivors) {
            const double value = candidates.row(s)[feature];
            column.push_back(value);
            if (value > best) best = value;
        }
        const double epsilon = config.epsilon_mode == LexicaseConfig::EpsilonMode::kMad
                                   ? mad_of(column)
                                   : config.epsilon_value;
        const double cutoff = best - epsilon;
        kept.clear();
        for (std::size_t s : survivors) {
            if (candidates.row(s)[feature] >= cutoff) kept.push_back(s);
        }
        survivors.swap(kept);
        if (survivors.size() == 1) return survivors.front();
    }
    return survivors[rng.next_below(survivors.size())];
}

}  // namespace

int lexicase_select_with_order(const CandidateSet& candidates,
                               std::span<const int> feature_order,
                               const LexicaseConfig& config, Rng& rng) {
    return candidates.items[select_position(candidates, feature_order, config, rng)];
}

int lexicase_select_one(const CandidateSet& candidates, const LexicaseConfig& config, Rng& rng) {
    if (config.max_features < 1) throw Error("max_features must be >= 1");
    std::vector<int> order(static_cast<std::size_t>(candidates.dim));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const std::size_t depth =
        std::min<std::size_t>(order.size(), static_cast<std::size_t>(config.max_features));
    const std::span<const int> visible(order.data(), depth);
    return candidates.items[select_position(candidates, visible, config, rng)];
}

RecommendationList lexicase_topk(const CandidateSet& candidates, int k,
                                 const LexicaseConfig& config) {
    if (candidates.size() == 0) throw Error("lexicase selection on an empty candidate set");
    if (k < 1) throw Error("k must be >= 1");
    Rng rng(config.seed);
    CandidateSet working = candidates;
    RecommendationList list;
    list.user = candidates.user;
    list.strategy = Strategy::kLexicase;
    list.k = k;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), working.size());
    std::vector<int> order(static_cast<std::size_t>(candidates.dim));
    while (list.items.size() < take) {
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        const std::size_t depth =
            std::min<std::size_t>(order.size(), static_cast<std::size_t>(config.max_features));
        const std::size_t pos =
            select_position(working, std::span<const int>(order.data(), depth), config, rng);
        list.items.push_back(working.items[pos]);
        working.items.erase(working.items.begin() + static_cast<std::ptrdiff_t>(pos));
        working.features.erase(
            working.features.begin() + static_cast<std::ptrdiff_t>(pos * working.dim),
            working.features.begin() + static_cast<std::ptrdiff_t>((pos + 1) * working.dim));
    }
    return list;
}

RecommendationList rank_topk(const CandidateSet& candidates, int k) {
    if (candidates.size() == 0) throw Error("ranking on an empty candidate set");
    if (k < 1) throw Error("k must be >= 1");
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> sums(candidates.size());
    for (std::size_t j = 0; j < candidates.size(); ++j) sums[j] = row_sum(candidates, j);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sums[a] != sums[b]) return sums[a] > sums[b];
        return candidates.items[a] < candidates.items[b];
    });
    RecommendationList list;
    list.user = candidates.user;
    list.strategy = Strategy::kRank;
    list.k = k;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    list.items.reserve(take);
    for (std::size_t j = 0; j < take; ++j) list.items.push_back(candidates.items[order[j]]);
    return list;
}

RecommendationList mix_interleave(const RecommendationList& ranked,
                                  const RecommendationList& lexed, int k) {
    if (ranked.user != lexed.user) throw Error("interleaving lists of different users");
    if (k < 1) throw Error("k must be >= 1");
    RecommendationList list;
    list.user = ranked.user;
    list.strategy = Strategy::kMix50;
    list.k = k;
    std::unordered_set<int> taken;
    std::size_t from_ranked = 0;
    std::size_t from_lexed = 0;
    bool ranked_turn = true;  // ranking contributes position 0
    while (static_cast<int>(list.items.size()) < k &&
           (from_ranked < ranked.items.size() || from_lexed < lexed.items.size())) {
        const std::vector<int>& source = ranked_turn ? ranked.items : lexed.items;
        std::size_t& cursor = ranked_turn ? from_ranked : from_lexed;
        if (cursor < source.size()) {
            const int item = source[cursor++];
            if (taken.insert(item).second) {
                list.items.push_back(item);
                ranked_turn = !ranked_turn;
            }
            // a duplicate consumes the source entry but keeps the turn
        } else {
            ranked_turn = !ranked_turn;
        }
    }
    return list;
}

RecommendationList random_topk(std::span<const int> pool, int user, int k, std::uint64_t seed) {
    if (pool.empty()) throw Error("random selection from an empty pool");
    if (k < 1) throw Error("k must be >= 1");
    Rng rng(seed);
    std::vector<int> items(pool.begin(), pool.end());
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), items.size());
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + rng.next_below(items.size() - i);
        std::swap(items[i], items[j]);
    }
    items.resize(take);
    RecommendationList list;
    list.user = user;
    list.strategy = Strategy::kRandom;
    list.k = k;
    list.items = std::move(items);
    return list;
}

}  // namespace lexirec
