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

#ifndef LEXIREC_METRICS_HPP
#define LEXIREC_METRICS_HPP

#include <map>
#include <span>
#include <vector>

#include "lexirec/clustering.hpp"
#include "lexirec/dataset.hpp"
#include "lexirec/selection.hpp"

namespace lexirec {

struct MetricReport {
    Strategy strategy = Strategy::kRank;
    int k = 0;
    double coverage = 0.0;
    double personalization = 0.0;
    double hit_rate = 0.0;
    double serendipity = 0.0;
    int num_users = 0;
};

// Fraction of the catalog recommended to at least one user.
double coverage(std::span<const RecommendationList> lists, int num_items);

// One minus the mean pairwise cosine similarity between users' binary
// item-incidence vectors. Needs at least two lists.
double personalization(std::span<const RecommendationList> lists);

// Per-user recall of held-out items, macro-averaged over users that have at
// least one test interaction.
double hit_rate(std::span<const RecommendationList> lists, const Dataset& test);

// n / min(|C|, |R|) where n is the number of distinct relevant clusters the
// list touches. Zero when the user has no relevant clusters.
double serendipity(const RecommendationList& list, const ClusterModel& clusters,
                   const RelevantClusters& relevant);

double mean_serendipity(std::span<const RecommendationList> lists, const ClusterModel& clusters,
                        const std::map<int, RelevantClusters>& per_user_relevant);

}  // namespace lexirec

#endif  // LEXIREC_METRICS_HPP
