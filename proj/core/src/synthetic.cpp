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

#include "lexirec/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "lexirec/error.hpp"
#include "lexirec/rng.hpp"

namespace lexirec {

namespace {

void validate(const SyntheticConfig& config) {
    if (config.num_users < 1 || config.num_items < 1) {
        throw ValidationError("synthetic data needs at least one user and one item");
    }
    if (config.num_groups < 1) throw ValidationError("num_groups must be positive");
    if (config.num_groups > std::min(config.num_users, config.num_items)) {
        throw ValidationError("num_groups exceeds the user or item count");
    }
    if (config.noise < 0.0) throw ValidationError("noise must be non-negative");
    if (config.density <= 0.0 || config.density > 1.0) {
        throw ValidationError("density must be in (0, 1]");
    }
    if (config.in_group_bias < 1.0) {
        throw ValidationError("in_group_bias must be at least 1");
    }
    if (config.popularity_skew < 0.0) {
        throw ValidationError("popularity_skew must be non-negative");
    }
    if (config.quality_range < 0.0) {
        throw ValidationError("quality_range must be non-negative");
    }
}

}  // namespace

std::vector<double> synthetic_popularity(const SyntheticConfig& config) {
    validate(config);
    Rng rng(derive_seed(config.seed, 0x706f70));
    std::vector<double> scores(static_cast<std::size_t>(config.num_items));
    for (double& score : scores) score = rng.next_double();
    return scores;
}

std::vector<Interaction> synthetic_interactions(const SyntheticConfig& config) {
    validate(config);
    const std::vector<double> popularity = synthetic_popularity(config);
    const double in_density = std::min(1.0, config.density * config.in_group_bias);
    std::vector<Interaction> out;
    out.reserve(static_cast<std::size_t>(config.num_users) *
                static_cast<std::size_t>(config.num_items));
    Rng rng(config.seed);
    std::int64_t timestamp = 1'000'000'000;
    for (int u = 0; u < config.num_users; ++u) {
        const int user_group = synthetic_group(u, config.num_groups);
        for (int i = 0; i < config.num_items; ++i) {
            const bool matched = synthetic_group(i, config.num_groups) == user_group;
            const double score = popularity[static_cast<std::size_t>(i)];
            double keep = matched ? in_density : config.density;
            if (config.popularity_skew > 0.0) {
                keep = std::min(1.0, keep * std::exp(config.popularity_skew * (score - 0.5)));
            }
            if (rng.next_double() >= keep) continue;
            const double jitter = config.noise * rng.next_double();
            double rating = matched ? 5.0 - jitter : 2.0 + jitter;
            rating += config.quality_range * (score - 0.5);
            rating = std::clamp(rating, 1.0, 5.0);
            out.push_back({u + 1, i + 1, rating, timestamp});
            ++timestamp;
        }
    }
    return out;
}

Dataset synthetic_dataset(const SyntheticConfig& config) {
    return Dataset::from_interactions(synthetic_interactions(config), RatingScale{});
}

}  // namespace lexirec
