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

#include "lexirec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "lexirec/error.hpp"

namespace lexirec {

double coverage(std::span<const RecommendationList> lists, int num_items) {
    if (num_items < 1) throw Error("coverage needs a non-empty catalog");
    if (lists.empty()) throw Error("coverage over an empty list collection");
    std::vector<bool> seen(static_cast<std::size_t>(num_items), false);
    std::size_t distinct = 0;
    for (const RecommendationList& list : lists) {
        for (int item : list.items) {
            if (item < 0 || item >= num_items) {
                throw std::out_of_range("item index " + std::to_string(item) + " out of range");
            }
            if (!seen[static_cast<std::size_t>(item)]) {
                seen[static_cast<std::size_t>(item)] = true;
                ++distinct;
            }
        }
    }
    return static_cast<double>(distinct) / static_cast<double>(num_items);
}

double personalization(std::span<const RecommendationList> lists) {
    if (lists.size() < 2) throw Error("personalization needs at least two lists");
    std::vector<std::vector<int>> sorted_items(lists.size());
    for (std::size_t i = 0; i < lists.size(); ++i) {
        sorted_items[i] = lists[i].items;
        std::sort(sorted_items[i].begin(), sorted_items[i].end());
    }
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        for (std::size_t j = i + 1; j < lists.size(); ++j) {
            const auto& a = sorted_items[i];
            const auto& b = sorted_items[j];
            double cosine = 0.0;
            if (!a.empty() && !b.empty()) {
                std::size_t inter = 0;
                std::size_t x = 0, y = 0;
                while (x < a.size() && y < b.size()) {
                    if (a[x] < b[y]) ++x;
                    else if (b[y] < a[x]) ++y;
                    else { ++inter; ++x; ++y; }
                }
                cosine = static_cast<double>(inter) /
                         (std::sqrt(static_cast<double>(a.size())) *
                          std::sqrt(static_cast<double>(b.size())));
            }
            total += cosine;
            ++pairs;
        }
    }
    return 1.0 - total / static_cast<double>(pairs);
}

double hit_rate(std::span<const RecommendationList> lists, const Dataset& test) {
    if (test.empty()) throw Error("hit rate needs a non-empty test set");
    double total = 0.0;
    std::size_t counted = 0;
    for (const RecommendationList& list : lists) {
        const auto history = user_history(test, list.user);
        if (history.empty()) continue;
        std::unordered_set<int> test_items;
        for (const auto& [item, rating] : history) test_items.insert(item);
        std::size_t hits = 0;
        for (int item : list.items) {
            if (test_items.count(item) != 0) ++hits;
        }
        total += static_cast<double>(hits) / static_cast<double>(test_items.size());
        ++counted;
    }
    if (counted == 0) throw Error("no evaluated user has test interactions");
    return total / static_cast<double>(counted);
}

double serendipity(const RecommendationList& list, const ClusterModel& clusters,
                   const RelevantClusters& relevant) {
    if (list.items.empty()) throw Error("serendipity of an empty list");
    if (relevant.clusters.empty()) return 0.0;
    std::set<int> touched;
    for (int item : list.items) {
        if (item < 0 || item >= static_cast<int>(clusters.assignments.size())) {
            throw std::out_of_range("item index " + std::to_string(item) + " out of range");
        }
        const int cluster = clusters.assignments[static_cast<std::size_t>(item)];
        if (relevant.clusters.count(cluster) != 0) touched.insert(cluster);
    }
    const std::size_t denom = std::min(relevant.clusters.size(), list.items.size());
    return static_cast<double>(touched.size()) / static_cast<double>(denom);
}

double mean_serendipity(std::span<const RecommendationList> lists, const ClusterModel& clusters,
                        const std::map<int, RelevantClusters>& per_user_relevant) {
    if (lists.empty()) throw Error("mean serendipity over an empty list collection");
    double total = 0.0;
    for (const RecommendationList& list : lists) {
        auto found = per_user_relevant.find(list.user);
        if (found == per_user_relevant.end()) {
            throw Error("no relevant-cluster set for user " + std::to_string(list.user));
        }
        total += serendipity(list, clusters, found->second);
    }
    return total / static_cast<double>(lists.size());
}

}  // namespace lexirec
