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

#ifndef LEXIREC_CLUSTERING_HPP
#define LEXIREC_CLUSTERING_HPP

#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace lexirec {

struct KmeansResult {
    std::vector<int> assignments;      // one cluster id per point
    std::vector<double> centroids;     // k x dim, row-major
    int k = 0;
    int dim = 0;
    int iterations = 0;
    double inertia = 0.0;              // sum of squared distances at exit
    std::vector<double> inertia_trace; // one entry per Lloyd iteration
};

// Lloyd's algorithm with k-means++ seeding. Empty clusters are repaired by
// donating the point currently farthest from its centroid. Deterministic for
// fixed inputs. Points are row-major `rows x dim`.
KmeansResult kmeans(std::span<const double> points, int rows, int dim, int k,
                    std::uint64_t seed, int max_iters = 100, double tol = 1e-6);

// floor(sqrt(n)), exact for the sizes we handle.
int sqrt_cluster_count(int n);

/**
 * Two-level clustering of item embeddings: items -> clusters, then cluster
 * centroids -> meta-clusters. Two clusters are "nearby" when their centroids
 * share a meta-cluster.
 */
struct ClusterModel {
    std::vector<int> assignments;       // num_items, cluster id per item
    std::vector<double> centroids;      // k_items x dim
    std::vector<int> meta_assignments;  // k_items, meta id per cluster
    int k_items = 0;
    int k_meta = 0;
    int dim = 0;
};

struct ClusterConfig {
    int k_items = 0;   // 0 -> floor(sqrt(num_items))
    int k_meta = 0;    // 0 -> max(1, floor(sqrt(k_items)))
    int max_iters = 100;
    double tol = 1e-6;
    int restarts = 8;  // independent k-means runs; the lowest inertia wins
};

// Requires at least 4 items. Each level runs `restarts` independently seeded
// k-means rounds (seeds derived from the master seed) and keeps the solution
// with the lowest inertia, ties going to the earliest round.
ClusterModel build_cluster_model(std::span<const double> item_embeddings, int num_items,
                                 int dim, std::uint64_t seed, const ClusterConfig& config = {});

// The clusters a user cares about: clusters holding an item the user rated at
// or above the threshold, widened to every cluster sharing a meta-cluster
// with one of those.
struct RelevantClusters {
    std::set<int> clusters;
    double threshold = 0.0;
};

RelevantClusters relevant_clusters(const ClusterModel& model,
                                   std::span<const std::pair<int, double>> history,
                                   double threshold);

}  // namespace lexirec

#endif  // LEXIREC_CLUSTERING_HPP
