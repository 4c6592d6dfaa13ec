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

#ifndef LEXIREC_SYNTHETIC_HPP
#define LEXIREC_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "lexirec/dataset.hpp"

namespace lexirec {

// Block-structured ratings: users and items are assigned to groups round-robin
// and a user rates items of the matching group high, everything else low.
// `noise` widens both bands (and lets them overlap once it exceeds 1.5);
// `density` is the probability that any given (user, item) pair is rated.
// `in_group_bias` multiplies that probability for matching-group pairs,
// capped at 1, mimicking the selection bias of real ratings data where
// users rate what they already like far more often.
//
// Each item also carries a fixed popularity score in [0, 1), independent of
// its group. `popularity_skew` multiplies the rate probability by
// exp(skew * (score - 0.5)), concentrating interactions on a head of popular
// items the way real catalogs do; `quality_range` shifts the mean rating by
// range * (score - 0.5), making popular items rate somewhat higher. Both
// default to zero, which leaves the classic uniform behavior untouched.
struct SyntheticConfig {
    int num_users = 50;
    int num_items = 40;
    int num_groups = 4;
    std::uint64_t seed = 0;
    double noise = 0.5;
    double density = 1.0;
    double in_group_bias = 1.0;
    double popularity_skew = 0.0;
    double quality_range = 0.0;
};

std::vector<Interaction> synthetic_interactions(const SyntheticConfig& config);

Dataset synthetic_dataset(const SyntheticConfig& config);

// Per-item popularity scores in [0, 1) for the given configuration, indexed
// by item number minus one. Deterministic in the seed and item count alone.
std::vector<double> synthetic_popularity(const SyntheticConfig& config);

// Group of a user or item index under the round-robin layout.
inline int synthetic_group(int index, int num_groups) { return index % num_groups; }

}  // namespace lexirec

#endif  // LEXIREC_SYNTHETIC_HPP
