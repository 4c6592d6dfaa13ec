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

#ifndef LEXIREC_EXPERIMENT_HPP
#define LEXIREC_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lexirec/clustering.hpp"
#include "lexirec/dataset.hpp"
#include "lexirec/metrics.hpp"
#include "lexirec/model.hpp"
#include "lexirec/selection.hpp"

namespace lexirec {

/**
 * Everything one benchmark run needs. A single seed drives every stage:
 * split, tuning, clustering, user sampling and per-user list seeds are all
 * derived from it, so equal configs produce byte-identical artifacts.
 */
struct ExperimentConfig {
    std::string data_path;
    RatingsFormat format = RatingsFormat::kMl100k;
    double train_fraction = 0.7;
    bool per_user_split = false;  // stratify the split within each user
    std::uint64_t seed = 0;
    std::vector<int> k_values = {5, 10, 15, 20, 25};  // positive, strictly ascending
    std::vector<Strategy> strategies = {Strategy::kRank, Strategy::kLexicase,
                                        Strategy::kMix50, Strategy::kRandom};
    double relevance_threshold = 4.0;
    LexicaseConfig lexicase;  // its seed field is ignored; per-user seeds are derived
    int search_trials = 10;   // 0 skips the search and trains with fixed_train
    TrainConfig fixed_train;  // hyperparameters when search_trials == 0 (seed derived)
    SearchSpace search_space;
    ClusterConfig cluster;
    int user_sample = 0;  // 0 evaluates every user
    int shortlist = 0;    // 0 keeps the full candidate pool
};

struct ExperimentResult {
    std::vector<MetricReport> reports;  // strategy-major, k ascending
    GmfModel model;
    TrainConfig model_config;
    double model_mae = 0.0;  // test-half MAE of the final model
    ClusterModel clusters;
    std::vector<RecommendationList> lists;  // report order; users ascending within a cell
    std::vector<int> users;                 // evaluated user indices, ascending
    std::uint64_t fingerprint = 0;
};

// The split and model stages of run_experiment, exposed on their own so
// `train` can persist exactly the model a `bench` or `score` run with the
// same config would use.
Split experiment_split(const ExperimentConfig& config, const Dataset& data);

struct TunedModel {
    GmfModel model;
    TrainConfig config;
    double mae = 0.0;  // MAE on the test half
};
TunedModel tune_model(const ExperimentConfig& config, const Split& halves);

// Runs parse -> split -> tune/train -> cluster -> list generation -> metrics.
// Stage errors are rethrown with the stage name prefixed to the message.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Same pipeline on an already parsed corpus; config.data_path is unused.
ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& data);

// Recomputes metric reports for previously dumped lists. The config's seed
// rebuilds the same split, cluster model and relevance sets the original run
// used, given the same data and the persisted model.
std::vector<MetricReport> score_lists(const ExperimentConfig& config, const Dataset& data,
                                      const GmfModel& model,
                                      std::span<const RecommendationList> lists);

// FNV-1a over a canonical rendering of every config field except data_path.
std::uint64_t config_fingerprint(const ExperimentConfig& config);

enum class ReportFormat {
    kTable,    // one aligned strategy x k grid per metric
    kMachine,  // one JSON object per report, metrics fixed to six decimals
};

void emit_report(std::span<const MetricReport> reports, std::uint64_t fingerprint,
                 ReportFormat format, std::ostream& out);
void emit_report_file(std::span<const MetricReport> reports, std::uint64_t fingerprint,
                      ReportFormat format, const std::string& path);

// Lists dump: "user_id<TAB>strategy<TAB>k<TAB>item_id,item_id,..." with
// original (file) ids. read_lists maps the ids back to indices of `data`.
void write_lists(std::span<const RecommendationList> lists, const Dataset& data,
                 std::ostream& out);
std::vector<RecommendationList> read_lists(std::istream& in, const Dataset& data);

// Cluster dump: "item_id<TAB>cluster_id<TAB>meta_id", one line per item.
void write_cluster_assignments(const ClusterModel& clusters, const Dataset& data,
                               std::ostream& out);

}  // namespace lexirec

#endif  // LEXIREC_EXPERIMENT_HPP
