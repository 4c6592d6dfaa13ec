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

#ifndef LEXIREC_TESTS_SUPPORT_HPP
#define LEXIREC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lexirec/clustering.hpp"
#include "lexirec/dataset.hpp"
#include "lexirec/rng.hpp"
#include "lexirec/selection.hpp"

namespace lexirec::testing {

inline Interaction ia(std::int64_t user, std::int64_t item, double rating,
                      std::int64_t timestamp = 0) {
    return Interaction{user, item, rating, timestamp};
}

inline Dataset make_dataset(std::vector<Interaction> interactions,
                            RatingScale scale = {1.0, 5.0}) {
    return Dataset::from_interactions(std::move(interactions), scale);
}

// Candidate set from explicit feature rows, bypassing any model.
inline CandidateSet make_candidates(std::vector<int> items,
                                    const std::vector<std::vector<double>>& rows,
                                    int user = 0) {
    if (rows.size() != items.size()) throw std::invalid_argument("rows/items mismatch");
    CandidateSet set;
    set.user = user;
    set.items = std::move(items);
    set.dim = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != set.dim) {
            throw std::invalid_argument("ragged feature rows");
        }
        set.features.insert(set.features.end(), row.begin(), row.end());
    }
    return set;
}

inline RecommendationList make_list(int user, std::vector<int> items,
                                    Strategy strategy = Strategy::kRank, int k = -1) {
    RecommendationList list;
    list.user = user;
    list.k = k < 0 ? static_cast<int>(items.size()) : k;
    list.items = std::move(items);
    list.strategy = strategy;
    return list;
}

// Highest fraction of positions where `assigned` equals `planted` under the
// best relabeling of the k assigned cluster ids. Brute force over all k!
// permutations; fine for the small k used in tests.
inline double best_permutation_agreement(const std::vector<int>& assigned,
                                         const std::vector<int>& planted, int k) {
    if (assigned.size() != planted.size() || assigned.empty()) {
        throw std::invalid_argument("label vectors must be nonempty and equal-sized");
    }
    std::vector<int> relabel(static_cast<std::size_t>(k));
    std::iota(relabel.begin(), relabel.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < assigned.size(); ++i) {
            if (relabel[static_cast<std::size_t>(assigned[i])] == planted[i]) ++hits;
        }
        best = std::max(best, hits);
    } while (std::next_permutation(relabel.begin(), relabel.end()));
    return static_cast<double>(best) / static_cast<double>(assigned.size());
}

// Reference implementation of one fixed-epsilon lexicase selection event,
// written as the plainest possible sequential filter. Draws from `rng` in the
// same pattern as the library (one shuffle up front, one uniform pick only if
// several survivors remain), so results are comparable call for call.
// `survivor_sizes`, when given, receives the survivor-set size after every
// applied filter.
inline int lexicase_reference(const CandidateSet& candidates, const LexicaseConfig& config,
                              Rng& rng, std::vector<std::size_t>* survivor_sizes = nullptr) {
    if (config.epsilon_mode != LexicaseConfig::EpsilonMode::kAbsolute) {
        throw std::invalid_argument("reference covers absolute epsilon only");
    }
    std::vector<int> order(static_cast<std::size_t>(candidates.dim));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const std::size_t depth =
        std::min<std::size_t>(order.size(), static_cast<std::size_t>(config.max_features));

    std::vector<std::size_t> survivors(candidates.size());
    std::iota(survivors.begin(), survivors.end(), std::size_t{0});
    if (survivor_sizes) survivor_sizes->clear();

    for (std::size_t oi = 0; oi < depth && survivors.size() > 1; ++oi) {
        const int feature = order[oi];
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s : survivors) best = std::max(best, candidates.row(s)[feature]);
        const double cutoff = best - config.epsilon_value;
        std::vector<std::size_t> kept;
        for (std::size_t s : survivors) {
            if (candidates.row(s)[feature] >= cutoff) kept.push_back(s);
        }
        survivors.swap(kept);
        if (survivor_sizes) survivor_sizes->push_back(survivors.size());
    }
    if (survivors.size() == 1) return candidates.items[survivors.front()];
    return candidates.items[survivors[rng.next_below(survivors.size())]];
}

}  // namespace lexirec::testing

#endif  // LEXIREC_TESTS_SUPPORT_HPP
