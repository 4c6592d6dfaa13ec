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

#include "lexirec/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lexirec/error.hpp"
#include "lexirec/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "model persistence assumes a little-endian host");

namespace lexirec {

namespace {

constexpr char kMagic[8] = {'L', 'X', 'R', 'E', 'C', 'G', 'M', 'F'};
constexpr unsigned char kVersion = 1;

void validate_config(const TrainConfig& config) {
    if (config.dim < 1) throw Error("dim must be >= 1");
    if (!(config.learning_rate > 0.0)) throw Error("learning_rate must be positive");
    if (config.l2_penalty < 0.0) throw Error("l2_penalty must be non-negative");
    if (config.epochs < 0) throw Error("epochs must be non-negative");
    if (!(config.init_scale > 0.0)) throw Error("init_scale must be positive");
}

}  // namespace

GmfModel::GmfModel(int num_users, int num_items, int dim,
                   std::vector<double> user_embeddings, std::vector<double> item_embeddings,
                   std::vector<double> output_weights)
    : num_users_(num_users),
      num_items_(num_items),
      dim_(dim),
      user_embeddings_(std::move(user_embeddings)),
      item_embeddings_(std::move(item_embeddings)),
      output_weights_(std::move(output_weights)) {
    if (num_users_ < 0 || num_items_ < 0 || dim_ < 1 ||
        user_embeddings_.size() != static_cast<std::size_t>(num_users_) * dim_ ||
        item_embeddings_.size() != static_cast<std::size_t>(num_items_) * dim_ ||
        output_weights_.size() != static_cast<std::size_t>(dim_)) {
        throw Error("model shapes are inconsistent");
    }
}

void GmfModel::check_indices(int user, int item) const {
    if (user < 0 || user >= num_users_) {
        throw std::out_of_range("user index " + std::to_string(user) + " out of range");
    }
    if (item < 0 || item >= num_items_) {
        throw std::out_of_range("item index " + std::to_string(item) + " out of range");
    }
}

std::span<const double> GmfModel::user_row(int user) const {
    if (user < 0 || user >= num_users_) {
        throw std::out_of_range("user index " + std::to_string(user) + " out of range");
    }
    return {user_embeddings_.data() + static_cast<std::size_t>(user) * dim_,
            static_cast<std::size_t>(dim_)};
}

std::span<const double> GmfModel::item_row(int item) const {
    if (item < 0 || item >= num_items_) {
        throw std::out_of_range("item index " + std::to_string(item) + " out of range");
    }
    return {item_embeddings_.data() + static_cast<std::size_t>(item) * dim_,
            static_cast<std::size_t>(dim_)};
}

double GmfModel::predict(int user, int item) const {
    check_indices(user, item);
    const double* u = user_embeddings_.data() + static_cast<std::size_t>(user) * dim_;
    const double* v = item_embeddings_.data() + static_cast<std::size_t>(item) * dim_;
    const double* w = output_weights_.data();
    // Term shape and summation order must match deaggregate() exactly.
    double sum = 0.0;
    for (int f = 0; f < dim_; ++f) sum += w[f] * (u[f] * v[f]);
    return sum;
}

PreferenceFeatures GmfModel::deaggregate(int user, int item) const {
    check_indices(user, item);
    const double* u = user_embeddings_.data() + static_cast<std::size_t>(user) * dim_;
    const double* v = item_embeddings_.data() + static_cast<std::size_t>(item) * dim_;
    const double* w = output_weights_.data();
    PreferenceFeatures features;
    features.values.resize(static_cast<std::size_t>(dim_));
    for (int f = 0; f < dim_; ++f) {
        features.values[static_cast<std::size_t>(f)] = w[f] * (u[f] * v[f]);
    }
    return features;
}

SampleGradients sample_gradients(const GmfModel& model, int user, int item, double rating,
                                 double l2_penalty) {
    const auto u = model.user_row(user);
    const auto v = model.item_row(item);
    const auto w = model.output_weights();
    const int d = model.dim();
    const double err = model.predict(user, item) - rating;
    SampleGradients g;
    g.user.resize(static_cast<std::size_t>(d));
    g.item.resize(static_cast<std::size_t>(d));
    g.weights.resize(static_cast<std::size_t>(d));
    for (int f = 0; f < d; ++f) {
        g.user[f] = 2.0 * err * w[f] * v[f] + 2.0 * l2_penalty * u[f];
        g.item[f] = 2.0 * err * w[f] * u[f] + 2.0 * l2_penalty * v[f];
        g.weights[f] = 2.0 * err * u[f] * v[f];
    }
    return g;
}

namespace {

// Full-batch objective: sum over samples of squared error plus the l2 term
// the per-sample updates penalize.
double full_batch_loss(const GmfModel& model, const Dataset& data,
                       const std::vector<std::pair<int, int>>& index_pairs, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto [u, v] = index_pairs[i];
        const double err = model.predict(u, v) - data.interactions()[i].rating;
        loss += err * err;
        if (l2 > 0.0) {
            double norms = 0.0;
            for (double x : model.user_row(u)) norms += x * x;
            for (double x : model.item_row(v)) norms += x * x;
            loss += l2 * norms;
        }
    }
    return loss;
}

}  // namespace

GmfModel train(const Dataset& data, const TrainConfig& config, std::vector<double>* epoch_loss) {
    if (data.empty()) throw Error("cannot train on an empty dataset");
    validate_config(config);

    const int d = config.dim;
    GmfModel model;
    model.num_users_ = data.num_users();
    model.num_items_ = data.num_items();
    model.dim_ = d;

    Rng rng(config.seed);
    model.user_embeddings_.resize(static_cast<std::size_t>(model.num_users_) * d);
    model.item_embeddings_.resize(static_cast<std::size_t>(model.num_items_) * d);
    for (double& x : model.user_embeddings_) x = rng.uniform(-config.init_scale, config.init_scale);
    for (double& x : model.item_embeddings_) x = rng.uniform(-config.init_scale, config.init_scale);
    model.output_weights_.assign(static_cast<std::size_t>(d), 1.0);

    // Resolve ids to indices once.
    std::vector<std::pair<int, int>> index_pairs(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Interaction& it = data.interactions()[i];
        index_pairs[i] = {data.user_index(it.user_id), data.item_index(it.item_id)};
    }

    if (epoch_loss) {
        epoch_loss->clear();
        epoch_loss->push_back(full_batch_loss(model, data, index_pairs, config.l2_penalty));
    }

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> gu(static_cast<std::size_t>(d));
    std::vector<double> gv(static_cast<std::size_t>(d));
    std::vector<double> gw(static_cast<std::size_t>(d));

    const double lr = config.learning_rate;
    const double l2 = config.l2_penalty;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double running_sq = 0.0;
        for (std::size_t pos : order) {
            const auto [ui, vi] = index_pairs[pos];
            const double rating = data.interactions()[pos].rating;
            double* u = model.user_embeddings_.data() + static_cast<std::size_t>(ui) * d;
            double* v = model.item_embeddings_.data() + static_cast<std::size_t>(vi) * d;
            double* w = model.output_weights_.data();
            double pred = 0.0;
            for (int f = 0; f < d; ++f) pred += w[f] * (u[f] * v[f]);
            const double err = pred - rating;
            running_sq += err * err;
            // Gradients from the pre-update values, applied together.
            for (int f = 0; f < d; ++f) {
                gu[f] = 2.0 * err * w[f] * v[f] + 2.0 * l2 * u[f];
                gv[f] = 2.0 * err * w[f] * u[f] + 2.0 * l2 * v[f];
                gw[f] = 2.0 * err * u[f] * v[f];
            }
            for (int f = 0; f < d; ++f) {
                u[f] -= lr * gu[f];
                v[f] -= lr * gv[f];
                w[f] -= lr * gw[f];
            }
        }
        if (!std::isfinite(running_sq)) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch), epoch);
        }
        if (epoch_loss) {
            epoch_loss->push_back(full_batch_loss(model, data, index_pairs, l2));
        }
    }
    return model;
}

double evaluate_mae(const GmfModel& model, const Dataset& data) {
    if (data.empty()) throw Error("cannot evaluate MAE on an empty dataset");
    double total = 0.0;
    for (const Interaction& it : data.interactions()) {
        const int u = data.user_index(it.user_id);
        const int v = data.item_index(it.item_id);
        total += std::fabs(model.predict(u, v) - it.rating);
    }
    return total / static_cast<double>(data.size());
}

SearchResult random_search(const Split& data, const SearchSpace& space, int trials,
                           std::uint64_t seed) {
    if (trials < 1) throw Error("random_search needs at least one trial");
    if (space.dims.empty() || space.epochs.empty()) throw Error("search space is empty");
    Rng rng(seed);
    SearchResult best;
    bool found = false;
    for (int t = 0; t < trials; ++t) {
        TrainConfig config;
        // Field sampling order is fixed; tests rely on it.
        config.dim = space.dims[rng.next_below(space.dims.size())];
        config.learning_rate = rng.log_uniform(space.lr_min, space.lr_max);
        config.l2_penalty = rng.log_uniform(space.l2_min, space.l2_max);
        config.epochs = space.epochs[rng.next_below(space.epochs.size())];
        config.init_scale = space.init_scale;
        // Every trial trains from the same seed, so trials differ only in the
        // hyperparameters they sampled and a collapsed space is a no-op.
        config.seed = seed;
        best.attempted.push_back(config);
        try {
            GmfModel model = train(data.train, config);
            const double mae = evaluate_mae(model, data.test);
            if (!found || mae < best.mae) {
                best.model = std::move(model);
                best.config = config;
                best.mae = mae;
                best.trial = t;
                found = true;
            }
        } catch (const DivergenceError&) {
            continue;
        }
    }
    if (!found) {
        std::ostringstream msg;
        msg << "every random-search trial diverged; attempted:";
        for (const TrainConfig& c : best.attempted) {
            msg << " {dim=" << c.dim << " lr=" << c.learning_rate << " l2=" << c.l2_penalty
                << " epochs=" << c.epochs << "}";
        }
        throw DivergenceError(msg.str(), -1);
    }
    return best;
}

namespace {

void write_raw(std::ostream& out, const void* data, std::size_t bytes) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void read_raw(std::istream& in, void* data, std::size_t bytes) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) {
        throw ValidationError("model file truncated");
    }
}

}  // namespace

void save_model(const GmfModel& model, std::ostream& out) {
    write_raw(out, kMagic, sizeof(kMagic));
    write_raw(out, &kVersion, 1);
    const std::uint32_t dim = static_cast<std::uint32_t>(model.dim());
    const std::uint64_t users = static_cast<std::uint64_t>(model.num_users());
    const std::uint64_t items = static_cast<std::uint64_t>(model.num_items());
    write_raw(out, &dim, sizeof(dim));
    write_raw(out, &users, sizeof(users));
    write_raw(out, &items, sizeof(items));
    write_raw(out, model.user_embeddings().data(),
              model.user_embeddings().size() * sizeof(double));
    write_raw(out, model.item_embeddings().data(),
              model.item_embeddings().size() * sizeof(double));
    write_raw(out, model.output_weights().data(),
              model.output_weights().size() * sizeof(double));
    if (!out) throw Error("failed writing model stream");
}

void save_model_file(const GmfModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open model file for writing: " + path);
    save_model(model, out);
}

GmfModel load_model(std::istream& in) {
    char magic[8];
    read_raw(in, magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ValidationError("not a model file (bad magic)");
    }
    unsigned char version = 0;
    read_raw(in, &version, 1);
    if (version != kVersion) {
        throw ValidationError("unsupported model version " + std::to_string(version));
    }
    std::uint32_t dim = 0;
    std::uint64_t users = 0;
    std::uint64_t items = 0;
    read_raw(in, &dim, sizeof(dim));
    read_raw(in, &users, sizeof(users));
    read_raw(in, &items, sizeof(items));
    if (dim == 0) throw ValidationError("model file declares dim 0");
    std::vector<double> ue(static_cast<std::size_t>(users) * dim);
    std::vector<double> ie(static_cast<std::size_t>(items) * dim);
    std::vector<double> w(dim);
    read_raw(in, ue.data(), ue.size() * sizeof(double));
    read_raw(in, ie.data(), ie.size() * sizeof(double));
    read_raw(in, w.data(), w.size() * sizeof(double));
    return GmfModel(static_cast<int>(users), static_cast<int>(items), static_cast<int>(dim),
                    std::move(ue), std::move(ie), std::move(w));
}

GmfModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path);
    return load_model(in);
}

}  // namespace lexirec
