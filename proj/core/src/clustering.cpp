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

#include "lexirec/clustering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lexirec/error.hpp"
#include "lexirec/rng.hpp"

namespace lexirec {

namespace {

double dist2(const double* a, const double* b, int dim) {
    double sum = 0.0;
    for (int f = 0; f < dim; ++f) {
        const double diff = a[f] - b[f];
        sum += diff * diff;
    }
    return sum;
}

// k-means++: first centroid uniform, the rest proportional to the squared
// distance to the nearest chosen centroid.
std::vector<double> plusplus_init(std::span<const double> points, int rows, int dim, int k,
                                  Rng& rng) {
    std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
    const std::size_t first = rng.next_below(static_cast<std::uint64_t>(rows));
    for (int f = 0; f < dim; ++f) centroids[f] = points[first * dim + f];

    std::vector<double> best_d2(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
        best_d2[i] = dist2(points.data() + static_cast<std::size_t>(i) * dim,
                           centroids.data(), dim);
    }
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (double w : best_d2) total += w;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.next_double() * total;
            double cum = 0.0;
            pick = static_cast<std::size_t>(rows) - 1;
            for (int i = 0; i < rows; ++i) {
                cum += best_d2[i];
                if (cum > target) {
                    pick = static_cast<std::size_t>(i);
                    break;
                }
            }
        } else {
            // Every point coincides with a chosen centroid.
            pick = rng.next_below(static_cast<std::uint64_t>(rows));
        }
        double* centroid = centroids.data() + static_cast<std::size_t>(c) * dim;
        for (int f = 0; f < dim; ++f) centroid[f] = points[pick * dim + f];
        for (int i = 0; i < rows; ++i) {
            const double d = dist2(points.data() + static_cast<std::size_t>(i) * dim,
                                   centroid, dim);
            if (d < best_d2[i]) best_d2[i] = d;
        }
    }
    return centroids;
}

}  // namespace

int sqrt_cluster_count(int n) {
    int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (static_cast<long long>(r + 1) * (r + 1) <= n) ++r;
    while (static_cast<long long>(r) * r > n) --r;
    return r;
}

KmeansResult kmeans(std::span<const double> points, int rows, int dim, int k,
                    std::uint64_t seed, int max_iters, double tol) {
    if (rows < 1 || dim < 1) throw Error("kmeans needs a non-empty point matrix");
    if (k < 1 || k > rows) {
        throw Error("kmeans k=" + std::to_string(k) + " outside [1, " + std::to_string(rows) + "]");
    }
    if (points.size() != static_cast<std::size_t>(rows) * dim) {
        throw Error("kmeans point matrix has wrong size");
    }
    for (double x : points) {
        if (!std::isfinite(x)) throw Error("kmeans input contains non-finite values");
    }

    Rng rng(seed);
    KmeansResult result;
    result.k = k;
    result.dim = dim;
    result.centroids = plusplus_init(points, rows, dim, k, rng);
    result.assignments.assign(static_cast<std::size_t>(rows), 0);

    std::vector<double> next(static_cast<std::size_t>(k) * dim);
    std::vector<int> counts(static_cast<std::size_t>(k));
    for (int iter = 0; iter < max_iters; ++iter) {
        // Assignment step; ties go to the lowest cluster id.
        for (int i = 0; i < rows; ++i) {
            const double* p = points.data() + static_cast<std::size_t>(i) * dim;
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                const double d = dist2(p, result.centroids.data() + static_cast<std::size_t>(c) * dim, dim);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            result.assignments[i] = best_c;
        }

        // Repair empty clusters before the update: each receives the point
        // farthest from its current centroid among clusters that can spare one.
        counts.assign(static_cast<std::size_t>(k), 0);
        for (int a : result.assignments) ++counts[a];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            double worst = -1.0;
            int victim = -1;
            for (int i = 0; i < rows; ++i) {
                if (counts[result.assignments[i]] < 2) continue;
                const double d =
                    dist2(points.data() + static_cast<std::size_t>(i) * dim,
                          result.centroids.data() +
                              static_cast<std::size_t>(result.assignments[i]) * dim,
                          dim);
                if (d > worst) {
                    worst = d;
                    victim = i;
                }
            }
            if (victim < 0) continue;  // k == rows with duplicates; leave empty
            --counts[result.assignments[victim]];
            result.assignments[victim] = c;
            ++counts[c];
        }

        // Update step: centroid = mean of members, accumulated in point order.
        next.assign(next.size(), 0.0);
        for (int i = 0; i < rows; ++i) {
            const int c = result.assignments[i];
            const double* p = points.data() + static_cast<std::size_t>(i) * dim;
            double* target = next.data() + static_cast<std::size_t>(c) * dim;
            for (int f = 0; f < dim; ++f) target[f] += p[f];
        }
        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            double* target = next.data() + static_cast<std::size_t>(c) * dim;
            if (counts[c] > 0) {
                for (int f = 0; f < dim; ++f) target[f] /= counts[c];
            } else {
                const double* old = result.centroids.data() + static_cast<std::size_t>(c) * dim;
                for (int f = 0; f < dim; ++f) target[f] = old[f];
            }
            movement = std::max(
                movement,
                dist2(target, result.centroids.data() + static_cast<std::size_t>(c) * dim, dim));
        }
        result.centroids = next;
        result.iterations = iter + 1;

        double inertia = 0.0;
        for (int i = 0; i < rows; ++i) {
            inertia += dist2(points.data() + static_cast<std::size_t>(i) * dim,
                             result.centroids.data() +
                                 static_cast<std::size_t>(result.assignments[i]) * dim,
                             dim);
        }
        result.inertia_trace.push_back(inertia);
        result.inertia = inertia;

        if (movement < tol) break;
    }
    return result;
}

namespace {

KmeansResult best_of_restarts(std::span<const double> points, int rows, int dim, int k,
                              std::uint64_t seed, std::uint64_t level,
                              const ClusterConfig& config) {
    KmeansResult best;
    for (int r = 0; r < config.restarts; ++r) {
        KmeansResult round =
            kmeans(points, rows, dim, k, derive_seed(seed, level, static_cast<std::uint64_t>(r)),
                   config.max_iters, config.tol);
        if (r == 0 || round.inertia < best.inertia) best = std::move(round);
    }
    return best;
}

}  // namespace

ClusterModel build_cluster_model(std::span<const double> item_embeddings, int num_items,
                                 int dim, std::uint64_t seed, const ClusterConfig& config) {
    if (num_items < 4) throw Error("cluster model needs at least 4 items");
    if (config.restarts < 1) throw Error("restarts must be >= 1");
    ClusterModel model;
    model.dim = dim;
    model.k_items = config.k_items > 0 ? config.k_items : sqrt_cluster_count(num_items);
    const KmeansResult items =
        best_of_restarts(item_embeddings, num_items, dim, model.k_items, seed, 0, config);
    model.assignments = items.assignments;
    model.centroids = items.centroids;
    model.k_meta =
        config.k_meta > 0 ? config.k_meta : std::max(1, sqrt_cluster_count(model.k_items));
    const KmeansResult meta =
        best_of_restarts(model.centroids, model.k_items, dim, model.k_meta, seed, 1, config);
    model.meta_assignments = meta.assignments;
    return model;
}

RelevantClusters relevant_clusters(const ClusterModel& model,
                                   std::span<const std::pair<int, double>> history,
                                   double threshold) {
    RelevantClusters result;
    result.threshold = threshold;
    std::set<int> seed_metas;
    for (const auto& [item, rating] : history) {
        if (item < 0 || item >= static_cast<int>(model.assignments.size())) {
            throw std::out_of_range("item index " + std::to_string(item) + " out of range");
        }
        if (rating >= threshold) {
            seed_metas.insert(model.meta_assignments[model.assignments[item]]);
        }
    }
    if (seed_metas.empty()) return result;
    for (int c = 0; c < model.k_items; ++c) {
        if (seed_metas.count(model.meta_assignments[c]) != 0) {
            result.clusters.insert(c);
        }
    }
    return result;
}

}  // namespace lexirec
