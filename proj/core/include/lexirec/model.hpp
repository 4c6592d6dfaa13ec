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

#ifndef LEXIREC_MODEL_HPP
#define LEXIREC_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lexirec/dataset.hpp"

namespace lexirec {

struct TrainConfig {
    int dim = 16;
    double learning_rate = 0.01;
    double l2_penalty = 1e-4;
    int epochs = 10;
    double init_scale = 0.1;
    std::uint64_t seed = 0;
};

// Per-dimension contributions of one (user, item) prediction. Summing the
// entries in index order reproduces the scalar prediction bit for bit.
struct PreferenceFeatures {
    std::vector<double> values;

    double sum() const {
        double total = 0.0;
        for (double v : values) total += v;
        return total;
    }
};

/**
 * Generalized matrix factorization: a rating is predicted as
 * sum_f w[f] * (u[f] * v[f]) over user row u, item row v and a learned output
 * weight vector w. Keeping the model a pure elementwise form is what makes
 * the per-dimension de-aggregation sum back to the prediction exactly.
 */
class GmfModel {
public:
    GmfModel() = default;
    GmfModel(int num_users, int num_items, int dim,
             std::vector<double> user_embeddings, std::vector<double> item_embeddings,
             std::vector<double> output_weights);

    int num_users() const { return num_users_; }
    int num_items() const { return num_items_; }
    int dim() const { return dim_; }

    double predict(int user, int item) const;
    PreferenceFeatures deaggregate(int user, int item) const;

    std::span<const double> user_row(int user) const;
    std::span<const double> item_row(int item) const;
    std::span<const double> output_weights() const { return output_weights_; }
    std::span<const double> user_embeddings() const { return user_embeddings_; }
    std::span<const double> item_embeddings() const { return item_embeddings_; }

private:
    friend GmfModel train(const Dataset&, const TrainConfig&, std::vector<double>*);

    void check_indices(int user, int item) const;

    int num_users_ = 0;
    int num_items_ = 0;
    int dim_ = 0;
    std::vector<double> user_embeddings_;  // num_users x dim, row-major
    std::vector<double> item_embeddings_;  // num_items x dim, row-major
    std::vector<double> output_weights_;   // dim
};

// Analytic gradient of one sample's loss
//   (predict(u,i) - rating)^2 + l2 * (|u_row|^2 + |v_row|^2)
// with respect to the touched user row, item row and output weights.
struct SampleGradients {
    std::vector<double> user;
    std::vector<double> item;
    std::vector<double> weights;
};
SampleGradients sample_gradients(const GmfModel& model, int user, int item, double rating,
                                 double l2_penalty);

// Seeded SGD over the training interactions, one shuffled pass per epoch.
// If `epoch_loss` is non-null it receives the full-batch objective after
// initialization and after every epoch. Throws DivergenceError when an
// epoch's running loss goes non-finite.
GmfModel train(const Dataset& data, const TrainConfig& config,
               std::vector<double>* epoch_loss = nullptr);

// Mean absolute error of the model over a held-out set.
double evaluate_mae(const GmfModel& model, const Dataset& data);

struct SearchSpace {
    std::vector<int> dims = {8, 16, 32};
    double lr_min = 1e-3, lr_max = 1e-1;    // log-uniform
    double l2_min = 1e-5, l2_max = 1e-2;    // log-uniform
    std::vector<int> epochs = {5, 10, 20};
    double init_scale = 0.1;
};

struct SearchResult {
    GmfModel model;
    TrainConfig config;
    double mae = 0.0;
    int trial = -1;
    std::vector<TrainConfig> attempted;
};

// Samples `trials` configs from the space (seeded), trains each on the train
// half and keeps the lowest test-half MAE. Diverging trials are skipped; if
// every trial diverges the error lists what was attempted.
SearchResult random_search(const Split& data, const SearchSpace& space, int trials,
                           std::uint64_t seed);

// Flat binary persistence: 8-byte magic, version byte, shapes, then raw
// little-endian doubles. Round trips are bit-exact.
void save_model(const GmfModel& model, std::ostream& out);
void save_model_file(const GmfModel& model, const std::string& path);
GmfModel load_model(std::istream& in);
GmfModel load_model_file(const std::string& path);

}  // namespace lexirec

#endif  // LEXIREC_MODEL_HPP
